#pragma once

// Output photon-number statistics of a spatially multiplexed heralded source
// with a thermal pair source, single-photon heralding, binomial arm loss and
// fixed-priority routing (the lowest-indexed heralded unit wins).

#include <optional>
#include <span>
#include <vector>

namespace gbm {

struct LossParams {
    double v_t = 0.985;  // router transmission (upper) input
    double v_r = 0.99;   // router reflection (lower) input
    double v_b = 0.98;   // losses between heralding and the multiplexer
    double v_d = 0.95;   // heralding detector efficiency

    // Throws ContractViolation unless every field lies in (0, 1].
    void validate() const;

    LossParams swapped() const { return {v_r, v_t, v_b, v_d}; }
};

bool is_probability(double x) noexcept;  // x in (0, 1]

// Total arm transmissions V_1 >= V_2 >= ... >= V_N, each in (0, 1].
class ArmVector {
public:
    ArmVector() = default;
    // Throws ContractViolation if not descending or out of range.
    explicit ArmVector(std::vector<double> v);
    static ArmVector from_unsorted(std::vector<double> v);

    std::span<const double> values() const noexcept { return v_; }
    std::size_t size() const noexcept { return v_.size(); }
    double operator[](std::size_t i) const noexcept { return v_[i]; }

    bool operator==(const ArmVector&) const = default;

private:
    std::vector<double> v_;
};

inline constexpr double kLambdaMax = 2.0;
inline constexpr int kDefaultIMax = 20;
inline constexpr double kDefaultSeriesTol = 1e-14;
inline constexpr int kDefaultLCap = 10000;

struct SeriesOptions {
    int i_max = kDefaultIMax;
    double tol = kDefaultSeriesTol;  // per-term truncation tolerance, (0, 1e-6]
    int l_cap = kDefaultLCap;
};

struct PhotonStatistics {
    std::vector<double> p;  // P_0 .. P_imax
    double p1 = 0.0;
    std::optional<double> g2;  // empty when the mean photon number vanishes
    double lambda = 0.0;
    // Probability missing from p: truncated pair-number series plus mass above i_max.
    double tail_bound = 0.0;
    // The pair-number series part of tail_bound alone; below the requested tol.
    double truncation_tail = 0.0;
    int l_max = 0;  // largest pair number included in the series
};

double thermal_pmf(int l, double lambda);
double detect_single_given_l(int l, double v_d);
double herald_prob(double lambda, double v_d);
// Throws std::domain_error for i > l.
double binomial_loss(int i, int l, double v_n);

// Adaptive series evaluation of P_i for i = 0 .. opts.i_max.
PhotonStatistics output_distribution(const ArmVector& arms, double lambda, double v_d,
                                     const SeriesOptions& opts = {});

// sum_{i>=2} i(i-1) P_i / (sum_{i>=1} i P_i)^2; throws UndefinedValueError on zero mean.
double g2(const PhotonStatistics& stats);
double g2(std::span<const double> p);

// Closed-form P_1 (the pair-number series summed analytically); used as the
// fast path inside lambda optimization.
double single_photon_probability(const ArmVector& arms, double lambda, double v_d);

}  // namespace gbm
