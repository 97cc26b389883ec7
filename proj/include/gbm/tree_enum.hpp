#pragma once

// Integer-sequence encoding of general binary-tree multiplexers.
//
// A tree of N_R routers is grown one router at a time. Router n is attached
// to the open input port at position entries[n-1] (1-indexed, counted top to
// bottom) of the tree built so far. Each router exposes its transmission (T)
// input above its reflection (R) input, so attaching a router to a port
// replaces that port with the pair [T, R] in place.

#include <compare>
#include <cstdint>
#include <iterator>
#include <memory>
#include <ranges>
#include <string>
#include <vector>

namespace gbm {

inline constexpr int kDefaultRouterCap = 15;
inline constexpr int kDefaultRawRouterCap = 10;

struct RouterSequence {
    std::vector<int> entries;

    int size() const noexcept { return static_cast<int>(entries.size()); }

    // "1-2-3-3-1": stable identifier used in tables and JSON.
    std::string id() const;

    auto operator<=>(const RouterSequence&) const = default;

    // [1, 2, ..., n]: every router hangs off the previous router's R port.
    static RouterSequence reflection_chain(int n_routers);
    // [1, 1, ..., 1]: every router hangs off the previous router's T port.
    static RouterSequence transmission_chain(int n_routers);
};

// entries[0] == 1 and 1 <= entries[n-1] <= n.
bool is_valid(const RouterSequence& seq) noexcept;
// Valid, and each step is a 0/+1 increment or an arbitrary decrement.
bool is_canonical(const RouterSequence& seq) noexcept;

enum class Port : std::uint8_t { T, R };

inline constexpr int kOutput = -1;

struct RouterNode {
    int parent = kOutput;  // router index, or kOutput
    Port port = Port::T;   // which input of the parent this router feeds
};

struct OpenPort {
    int router = 0;
    Port port = Port::T;
    bool operator==(const OpenPort&) const = default;
};

struct MultiplexerTree {
    std::vector<RouterNode> routers;
    std::vector<OpenPort> open_ports;  // N_R + 1 leaf inputs, top to bottom
};

// Symbolic arm transmission V_b * V_r^j * V_t^k.
struct ArmExponents {
    int j = 0;  // reflection ports traversed
    int k = 0;  // transmission ports traversed
    auto operator<=>(const ArmExponents&) const = default;
};

// Multiset of arm exponents, kept sorted by (j, k).
class TransmissionSet {
public:
    TransmissionSet() = default;
    explicit TransmissionSet(std::vector<ArmExponents> arms);

    const std::vector<ArmExponents>& arms() const& noexcept { return arms_; }
    std::vector<ArmExponents> arms() && { return std::move(arms_); }
    std::size_t size() const noexcept { return arms_.size(); }

    // Image under the V_t <-> V_r exchange.
    TransmissionSet swapped() const;

    // Compact byte key; equal keys iff equal multisets.
    std::string key() const;

    auto operator<=>(const TransmissionSet&) const = default;

private:
    std::vector<ArmExponents> arms_;
};

std::uint64_t catalan(int n_routers);
std::uint64_t factorial(int n);

// Lazily generated range of sequences in lexicographic order.
class SequenceRange {
public:
    enum class Kind { Canonical, Raw };

    class iterator {
    public:
        using value_type = RouterSequence;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(Kind kind, int n_routers);

        const RouterSequence& operator*() const noexcept { return current_; }
        const RouterSequence* operator->() const noexcept { return &current_; }
        iterator& operator++();
        void operator++(int) { ++*this; }
        bool operator==(std::default_sentinel_t) const noexcept { return done_; }

    private:
        Kind kind_ = Kind::Canonical;
        RouterSequence current_;
        bool done_ = true;
    };

    SequenceRange(Kind kind, int n_routers, int cap);

    iterator begin() const { return iterator(kind_, n_routers_); }
    std::default_sentinel_t end() const noexcept { return {}; }

    // Number of sequences the range will yield.
    std::uint64_t count() const;

private:
    Kind kind_;
    int n_routers_;
};

// Catalan-many canonical sequences; throws SizeLimitError above cap.
SequenceRange generate_canonical_sequences(int n_routers, int cap = kDefaultRouterCap);
// All n! raw sequences (every valid connection choice), for oracle checks.
SequenceRange generate_raw_sequences(int n_routers, int cap = kDefaultRawRouterCap);

// Throws MalformedSequenceError for entries outside [1, n]. Canonical form is not required.
MultiplexerTree build_tree(const RouterSequence& seq);

// Exponents in open-port order (top to bottom), not sorted.
std::vector<ArmExponents> arm_exponents_in_port_order(const MultiplexerTree& tree);

TransmissionSet arm_transmissions(const MultiplexerTree& tree);

// Same result as arm_transmissions(build_tree(seq)) without materializing the tree.
TransmissionSet transmission_set(const RouterSequence& seq);

struct Structure {
    RouterSequence sequence;
    TransmissionSet arms;
    std::uint64_t enumeration_index = 0;  // position in the generating stream
};

// First-seen-wins reduction over a deterministic sequence stream.
class StructureDeduplicator {
public:
    StructureDeduplicator();
    ~StructureDeduplicator();
    StructureDeduplicator(StructureDeduplicator&&) noexcept;
    StructureDeduplicator& operator=(StructureDeduplicator&&) noexcept;

    // Returns true when seq introduces a new transmission set.
    bool add(const RouterSequence& seq);

    std::uint64_t seen() const noexcept { return seen_; }
    const std::vector<Structure>& structures() const& noexcept { return structures_; }
    std::vector<Structure> release() && { return std::move(structures_); }

private:
    struct Index;
    std::unique_ptr<Index> index_;
    std::vector<Structure> structures_;
    std::uint64_t seen_ = 0;
};

template <std::ranges::input_range Seqs>
std::vector<Structure> dedup_structures(Seqs&& seqs) {
    StructureDeduplicator dedup;
    for (const RouterSequence& seq : seqs) dedup.add(seq);
    return std::move(dedup).release();
}

// Deduplicated structures for one router count; independent of loss parameters.
struct StructureCatalog {
    int n_routers = 0;
    std::uint64_t n_sequences = 0;
    std::vector<Structure> structures;
};

StructureCatalog build_catalog(int n_routers, int cap = kDefaultRouterCap);

// True if tset is the transmission set of either chain of n_routers routers.
bool is_chain(const TransmissionSet& tset, int n_routers);

}  // namespace gbm
