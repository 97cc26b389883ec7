#include "gbm/tree_enum.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "gbm/errors.hpp"

namespace gbm {

std::string RouterSequence::id() const {
    std::string out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(entries[i]);
    }
    return out;
}

RouterSequence RouterSequence::reflection_chain(int n_routers) {
    RouterSequence seq;
    for (int n = 1; n <= n_routers; ++n) seq.entries.push_back(n);
    return seq;
}

RouterSequence RouterSequence::transmission_chain(int n_routers) {
    return RouterSequence{std::vector<int>(static_cast<std::size_t>(n_routers), 1)};
}

bool is_valid(const RouterSequence& seq) noexcept {
    if (seq.entries.empty() || seq.entries.front() != 1) return false;
    for (int n = 1; n <= seq.size(); ++n) {
        const int e = seq.entries[static_cast<std::size_t>(n - 1)];
        if (e < 1 || e > n) return false;
    }
    return true;
}

bool is_canonical(const RouterSequence& seq) noexcept {
    if (!is_valid(seq)) return false;
    for (std::size_t i = 1; i < seq.entries.size(); ++i) {
        if (seq.entries[i] > seq.entries[i - 1] + 1) return false;
    }
    return true;
}

TransmissionSet::TransmissionSet(std::vector<ArmExponents> arms) : arms_(std::move(arms)) {
    std::sort(arms_.begin(), arms_.end());
}

TransmissionSet TransmissionSet::swapped() const {
    std::vector<ArmExponents> out;
    out.reserve(arms_.size());
    for (const auto& a : arms_) out.push_back({a.k, a.j});
    return TransmissionSet(std::move(out));
}

std::string TransmissionSet::key() const {
    std::string key;
    key.reserve(arms_.size() * 2);
    for (const auto& a : arms_) {
        key.push_back(static_cast<char>(a.j));
        key.push_back(static_cast<char>(a.k));
    }
    return key;
}

std::uint64_t catalan(int n_routers) {
    if (n_routers < 1) throw ContractViolation("catalan: n_routers must be >= 1");
    // C_{m+1} = C_m * 2(2m+1) / (m+2); exact at every step. Dividing out
    // gcd(C_m, m+2) first leaves a denominator that divides 2(2m+1).
    std::uint64_t c = 1;
    for (int m = 1; m < n_routers; ++m) {
        const auto den = static_cast<std::uint64_t>(m + 2);
        const std::uint64_t g = std::gcd(c, den);
        const std::uint64_t factor = static_cast<std::uint64_t>(2 * (2 * m + 1)) / (den / g);
        if (__builtin_mul_overflow(c / g, factor, &c)) {
            throw std::overflow_error("catalan(" + std::to_string(n_routers) +
                                      ") overflows 64-bit integer");
        }
    }
    return c;
}

std::uint64_t factorial(int n) {
    if (n < 0) throw ContractViolation("factorial: negative argument");
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) {
        if (__builtin_mul_overflow(f, static_cast<std::uint64_t>(k), &f)) {
            throw std::overflow_error("factorial(" + std::to_string(n) + ") overflows 64-bit integer");
        }
    }
    return f;
}

SequenceRange::iterator::iterator(Kind kind, int n_routers)
    : kind_(kind),
      current_{std::vector<int>(static_cast<std::size_t>(n_routers), 1)},
      done_(n_routers < 1) {}

SequenceRange::iterator& SequenceRange::iterator::operator++() {
    auto& s = current_.entries;
    for (std::size_t p = s.size(); p-- > 1;) {
        const int limit = kind_ == Kind::Canonical ? s[p - 1] + 1 : static_cast<int>(p) + 1;
        if (s[p] < limit) {
            ++s[p];
            std::fill(s.begin() + static_cast<std::ptrdiff_t>(p) + 1, s.end(), 1);
            return *this;
        }
    }
    done_ = true;
    return *this;
}

SequenceRange::SequenceRange(Kind kind, int n_routers, int cap) : kind_(kind), n_routers_(n_routers) {
    if (n_routers < 1) throw ContractViolation("n_routers must be >= 1");
    if (n_routers > cap) {
        const std::uint64_t count = kind == Kind::Canonical ? catalan(n_routers) : factorial(n_routers);
        throw SizeLimitError(n_routers, cap, count);
    }
}

std::uint64_t SequenceRange::count() const {
    return kind_ == Kind::Canonical ? catalan(n_routers_) : factorial(n_routers_);
}

SequenceRange generate_canonical_sequences(int n_routers, int cap) {
    return SequenceRange(SequenceRange::Kind::Canonical, n_routers, cap);
}

SequenceRange generate_raw_sequences(int n_routers, int cap) {
    return SequenceRange(SequenceRange::Kind::Raw, n_routers, cap);
}

MultiplexerTree build_tree(const RouterSequence& seq) {
    if (seq.entries.empty()) throw MalformedSequenceError("empty router sequence");
    MultiplexerTree tree;
    tree.routers.reserve(seq.entries.size());
    tree.open_ports.reserve(seq.entries.size() + 1);
    for (int n = 1; n <= seq.size(); ++n) {
        const int pos = seq.entries[static_cast<std::size_t>(n - 1)];
        if (pos < 1 || pos > n) {
            throw MalformedSequenceError("entry " + std::to_string(pos) + " at position " +
                                         std::to_string(n) + " outside [1, " + std::to_string(n) +
                                         "] in sequence " + seq.id());
        }
        const int router = n - 1;
        if (n == 1) {
            tree.routers.push_back({kOutput, Port::T});
            tree.open_ports = {{router, Port::T}, {router, Port::R}};
            continue;
        }
        const auto slot = tree.open_ports.begin() + (pos - 1);
        tree.routers.push_back({slot->router, slot->port});
        *slot = {router, Port::T};
        tree.open_ports.insert(slot + 1, {router, Port::R});
    }
    return tree;
}

std::vector<ArmExponents> arm_exponents_in_port_order(const MultiplexerTree& tree) {
    std::vector<ArmExponents> out;
    out.reserve(tree.open_ports.size());
    for (const OpenPort& leaf : tree.open_ports) {
        ArmExponents e;
        Port port = leaf.port;
        int router = leaf.router;
        while (true) {
            (port == Port::R ? e.j : e.k) += 1;
            const RouterNode& node = tree.routers[static_cast<std::size_t>(router)];
            if (node.parent == kOutput) break;
            port = node.port;
            router = node.parent;
        }
        out.push_back(e);
    }
    return out;
}

TransmissionSet arm_transmissions(const MultiplexerTree& tree) {
    return TransmissionSet(arm_exponents_in_port_order(tree));
}

TransmissionSet transmission_set(const RouterSequence& seq) {
    if (!is_valid(seq)) throw MalformedSequenceError("invalid router sequence " + seq.id());
    std::vector<ArmExponents> ports{{0, 1}, {1, 0}};
    ports.reserve(seq.entries.size() + 1);
    for (std::size_t i = 1; i < seq.entries.size(); ++i) {
        const auto slot = ports.begin() + (seq.entries[i] - 1);
        const ArmExponents parent = *slot;
        *slot = {parent.j, parent.k + 1};
        ports.insert(slot + 1, {parent.j + 1, parent.k});
    }
    return TransmissionSet(std::move(ports));
}

struct StructureDeduplicator::Index {
    std::unordered_map<std::string, std::size_t> by_key;
};

StructureDeduplicator::StructureDeduplicator() : index_(std::make_unique<Index>()) {}
StructureDeduplicator::~StructureDeduplicator() = default;
StructureDeduplicator::StructureDeduplicator(StructureDeduplicator&&) noexcept = default;
StructureDeduplicator& StructureDeduplicator::operator=(StructureDeduplicator&&) noexcept = default;

bool StructureDeduplicator::add(const RouterSequence& seq) {
    TransmissionSet tset = transmission_set(seq);
    const std::uint64_t index = seen_++;
    auto [it, inserted] = index_->by_key.try_emplace(tset.key(), structures_.size());
    if (!inserted) return false;
    structures_.push_back({seq, std::move(tset), index});
    return true;
}

StructureCatalog build_catalog(int n_routers, int cap) {
    StructureDeduplicator dedup;
    for (const RouterSequence& seq : generate_canonical_sequences(n_routers, cap)) dedup.add(seq);
    StructureCatalog catalog;
    catalog.n_routers = n_routers;
    catalog.n_sequences = dedup.seen();
    catalog.structures = std::move(dedup).release();
    return catalog;
}

bool is_chain(const TransmissionSet& tset, int n_routers) {
    return tset == transmission_set(RouterSequence::reflection_chain(n_routers)) ||
           tset == transmission_set(RouterSequence::transmission_chain(n_routers));
}

}  // namespace gbm
