#pragma once

// JSON forms of the public result types. Floating-point values are rounded
// to 12 significant digits on output.

#include <json.hpp>

#include "gbm/montecarlo.hpp"
#include "gbm/optimizer.hpp"
#include "gbm/sweeps.hpp"

namespace gbm {

using nlohmann::json;

double round_significant(double x, int digits = 12);

void to_json(json& j, const RouterSequence& seq);
void to_json(json& j, const ArmExponents& a);
void to_json(json& j, const TransmissionSet& t);
void to_json(json& j, const Structure& s);  // {"sequence": [...], "arms": [{"j":..,"k":..}, ...]}
void to_json(json& j, const LossParams& p);
void to_json(json& j, const ArmVector& v);
void to_json(json& j, const PhotonStatistics& s);
void to_json(json& j, const StructureOptimum& o);
void to_json(json& j, const SearchReport& r);
void to_json(json& j, const SimResult& r);
void to_json(json& j, const Chi2Result& r);
void to_json(json& j, const AxisRange& a);
void to_json(json& j, const GridSpec& g);

void from_json(const json& j, LossParams& p);

// Accepts a search report ({"optimum": {"arms": [...]}}), an object with a
// numeric "arms" array, or a bare numeric array.
ArmVector arms_from_json(const json& doc);

}  // namespace gbm
