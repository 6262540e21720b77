#pragma once

#include <cmath>

#include <json.hpp>

#include "ptorsion/report.hpp"
#include "ptorsion/spectral.hpp"
#include "ptorsion/torsion.hpp"

namespace ptorsion::detail {

using Json = nlohmann::json;

// nlohmann maps NaN to null already; infinities need the same treatment.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const InequalityReport& report);
Json to_json(const TorsionResult& result);
Json to_json(const PoincareResult& result);

}  // namespace ptorsion::detail
