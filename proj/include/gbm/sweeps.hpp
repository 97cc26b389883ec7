#pragma once

// Parameter maps over the router coefficients (V_t, V_r) and the number of
// multiplexed units. Cells are evaluated independently; rows come back in
// row-major order (V_t index outer, V_r index inner) whatever the thread count.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gbm/optimizer.hpp"

namespace gbm {

struct AxisRange {
    double lo = 0.9;
    double hi = 0.99;
    int steps = 46;

    double value(int i) const;
};

struct GridSpec {
    AxisRange vt;
    AxisRange vr;
    double v_d = 0.95;
    double v_b = 0.98;
    int n_units = 11;

    // Axes must satisfy 0.9 <= lo < hi <= 0.99 with steps >= 2; a single-point
    // axis (lo == hi, steps == 1) is also accepted.
    void validate() const;
    std::size_t cell_count() const { return static_cast<std::size_t>(vt.steps) * static_cast<std::size_t>(vr.steps); }
    LossParams params_at(std::size_t cell) const;
};

struct SurfaceRow {
    double v_t = 0.0;
    double v_r = 0.0;
    double p1_max = 0.0;
    double g2 = 0.0;
    double lambda_opt = 0.0;
    std::string structure_id;
    TransmissionSet symbolic;
    bool at_bracket_edge = false;
};

struct DiffRow {
    double v_t = 0.0;
    double v_r = 0.0;
    double delta_p1 = 0.0;  // OGBM - ASYM
    double delta_g2 = 0.0;  // ASYM - OGBM
    double p1_ogbm = 0.0;
    double p1_asym = 0.0;
    double g2_ogbm = 0.0;
    double g2_asym = 0.0;
    std::string structure_id;
    bool winner_is_chain = false;
};

enum class Half { Upper, Lower };  // Upper: v_r >= v_t, Lower: v_r <= v_t
const char* to_string(Half h) noexcept;
bool in_half(Half h, double v_t, double v_r) noexcept;

struct OccurrenceEntry {
    std::string structure_id;
    TransmissionSet symbolic;
    int count = 0;
};

struct OccurrenceMap {
    GridSpec grid;
    Half half = Half::Upper;
    std::vector<std::optional<int>> cells;  // index into ranking; empty outside the half
    std::vector<OccurrenceEntry> ranking;   // by count descending, then first appearance

    int total_counted() const;
};

struct NScalingRow {
    int n_units = 0;
    double p1_max = 0.0;
    double g2 = 0.0;
    double lambda_opt = 0.0;
    std::string structure_id;
};

std::vector<SurfaceRow> surface_sweep(const GridSpec& grid, int threads = 1);
std::vector<DiffRow> diff_vs_asym(const GridSpec& grid, int threads = 1);
OccurrenceMap occurrence_map(const GridSpec& grid, Half half, int threads = 1);
std::vector<NScalingRow> n_scaling(const LossParams& params, const std::vector<int>& n_units, int threads = 1);

// ASYM baseline evaluated as the matching chain structure.
StructureOptimum evaluate_asym(int n_units, const LossParams& params);

void write_csv(std::ostream& os, const std::vector<SurfaceRow>& rows);
void write_csv(std::ostream& os, const std::vector<DiffRow>& rows);
void write_csv(std::ostream& os, const OccurrenceMap& map);
void write_csv(std::ostream& os, const std::vector<NScalingRow>& rows);

}  // namespace gbm
