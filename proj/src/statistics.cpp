#include "gbm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gbm/errors.hpp"

namespace gbm {

bool is_probability(double x) noexcept { return x > 0.0 && x <= 1.0; }

void LossParams::validate() const {
    const auto check = [](double x, const char* name) {
        if (!is_probability(x)) {
            throw ContractViolation(std::string(name) + " = " + std::to_string(x) + " outside (0, 1]");
        }
    };
    check(v_t, "v_t");
    check(v_r, "v_r");
    check(v_b, "v_b");
    check(v_d, "v_d");
}

ArmVector::ArmVector(std::vector<double> v) : v_(std::move(v)) {
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (!is_probability(v_[i])) {
            throw ContractViolation("arm transmission " + std::to_string(v_[i]) + " outside (0, 1]");
        }
        if (i > 0 && v_[i] > v_[i - 1]) throw ContractViolation("arm transmissions must be non-increasing");
    }
}

ArmVector ArmVector::from_unsorted(std::vector<double> v) {
    std::stable_sort(v.begin(), v.end(), std::greater<>());
    return ArmVector(std::move(v));
}

double thermal_pmf(int l, double lambda) {
    if (l < 0) return 0.0;
    return std::pow(lambda, l) / std::pow(1.0 + lambda, l + 1);
}

double detect_single_given_l(int l, double v_d) {
    if (l <= 0) return 0.0;
    return l * v_d * std::pow(1.0 - v_d, l - 1);
}

double herald_prob(double lambda, double v_d) {
    const double x = v_d * lambda;
    return x / ((x + 1.0) * (x + 1.0));
}

double binomial_loss(int i, int l, double v_n) {
    if (i < 0 || i > l) {
        throw std::domain_error("binomial_loss: i = " + std::to_string(i) + " outside [0, l = " +
                                std::to_string(l) + "]");
    }
    if (v_n >= 1.0) return i == l ? 1.0 : 0.0;
    if (v_n <= 0.0) return i == 0 ? 1.0 : 0.0;
    // log C(l, i) accumulated term by term.
    const int m = std::min(i, l - i);
    double log_c = 0.0;
    for (int t = 1; t <= m; ++t) log_c += std::log(static_cast<double>(l - m + t) / t);
    return std::exp(log_c + i * std::log(v_n) + (l - i) * std::log1p(-v_n));
}

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda <= kLambdaMax)) {
        throw ContractViolation("lambda = " + std::to_string(lambda) + " outside (0, 2]");
    }
}

}  // namespace

PhotonStatistics output_distribution(const ArmVector& arms, double lambda, double v_d,
                                     const SeriesOptions& opts) {
    check_lambda(lambda);
    if (!is_probability(v_d)) throw ContractViolation("v_d outside (0, 1]");
    if (opts.i_max < 1) throw ContractViolation("i_max must be >= 1");
    if (!(opts.tol > 0.0 && opts.tol <= 1e-6)) throw ContractViolation("tol outside (0, 1e-6]");
    if (arms.size() == 0) throw ContractViolation("arm vector is empty");

    const std::size_t n_arms = arms.size();
    const std::size_t width = static_cast<std::size_t>(opts.i_max) + 1;

    // Weight of "exactly one idler click and l pairs": w_l = P^D(1|l) P^lambda(l)
    //   = l * v_d/(1+lambda) * x * r^(l-1),  x = lambda/(1+lambda),  r = (1-v_d) x.
    const double x = lambda / (1.0 + lambda);
    const double r = (1.0 - v_d) * x;
    const double w_scale = v_d / (1.0 + lambda) * x;

    // Per-arm rows of Binomial(l, V_n) truncated to i <= i_max, advanced by the
    // Pascal recurrence b_{l+1}(i) = (1-V) b_l(i) + V b_l(i-1).
    std::vector<std::vector<double>> rows(n_arms, std::vector<double>(width, 0.0));
    for (auto& row : rows) row[0] = 1.0;  // l = 0

    std::vector<double> arm_sum(n_arms * width, 0.0);
    std::vector<double> arm_overflow(n_arms, 0.0);

    const double small = opts.tol / 10.0;
    int below = 0;
    double r_pow = 1.0;  // r^(l-1)
    int l = 0;
    double w = 0.0;
    double l_tail = 0.0;
    while (true) {
        ++l;
        if (l > opts.l_cap) {
            throw ConvergenceError("pair-number series not converged within l_cap = " +
                                   std::to_string(opts.l_cap));
        }
        if (l > 1) r_pow *= r;
        w = l * w_scale * r_pow;

        for (std::size_t n = 0; n < n_arms; ++n) {
            auto& row = rows[n];
            const double v = arms[n];
            const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(l), width - 1);
            for (std::size_t i = top; i > 0; --i) row[i] = (1.0 - v) * row[i] + v * row[i - 1];
            row[0] *= (1.0 - v);
            double kept = 0.0;
            for (std::size_t i = 0; i <= top; ++i) {
                arm_sum[n * width + i] += w * row[i];
                kept += row[i];
            }
            arm_overflow[n] += w * std::max(0.0, 1.0 - kept);
        }

        below = (w < small) ? below + 1 : 0;
        // Ten consecutive negligible terms, then require the geometric bound on
        // sum_{l' > l} w_l' (ratio w_{l'+1}/w_l' <= q) to be below tol for all arms together.
        if (below >= 10) {
            const double q = r * (l + 2.0) / (l + 1.0);
            if (q < 1.0) {
                l_tail = (l + 1) * w_scale * r_pow * r / (1.0 - q);
                if (l_tail * static_cast<double>(n_arms) < opts.tol) break;
            }
        }
    }

    const double herald = herald_prob(lambda, v_d);
    PhotonStatistics stats;
    stats.lambda = lambda;
    stats.l_max = l;
    stats.p.assign(width, 0.0);
    double priority = 1.0;  // (1 - P_1^D)^(n-1)
    double truncation = 0.0;
    double overflow = 0.0;
    for (std::size_t n = 0; n < n_arms; ++n) {
        for (std::size_t i = 0; i < width; ++i) stats.p[i] += priority * arm_sum[n * width + i];
        truncation += priority * l_tail;
        overflow += priority * arm_overflow[n];
        priority *= (1.0 - herald);
    }
    stats.p[0] += priority;  // no unit heralded
    stats.p1 = stats.p[1];
    stats.truncation_tail = truncation;
    stats.tail_bound = truncation + overflow;

    double mean = 0.0;
    for (std::size_t i = 1; i < width; ++i) mean += i * stats.p[i];
    if (mean > 0.0) stats.g2 = g2(stats.p);
    return stats;
}

double g2(std::span<const double> p) {
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        mean += static_cast<double>(i) * p[i];
        second += static_cast<double>(i) * static_cast<double>(i - 1) * p[i];
    }
    if (!(mean > 0.0)) throw UndefinedValueError("g2 undefined: zero mean photon number");
    return second / (mean * mean);
}

double g2(const PhotonStatistics& stats) { return g2(stats.p); }

double single_photon_probability(const ArmVector& arms, double lambda, double v_d) {
    // sum_l l^2 v_d V (1-v_d)^(l-1) (1-V)^(l-1) lambda^l / (1+lambda)^(l+1)
    //   = v_d V lambda/(1+lambda)^2 * (1+y)/(1-y)^3,  y = (1-v_d)(1-V) lambda/(1+lambda).
    const double x = lambda / (1.0 + lambda);
    const double front = v_d * x / (1.0 + lambda);
    const double herald = herald_prob(lambda, v_d);
    double priority = 1.0;
    double p1 = 0.0;
    for (double v : arms.values()) {
        const double y = (1.0 - v_d) * (1.0 - v) * x;
        const double one_minus_y = 1.0 - y;
        p1 += priority * front * v * (1.0 + y) / (one_minus_y * one_minus_y * one_minus_y);
        priority *= (1.0 - herald);
    }
    return p1;
}

}  // namespace gbm
