#pragma once

#include "omegahat/interval.hpp"

#include "json.hpp"

namespace omegahat::linalg {

using nlohmann::json;

/// {"dim": m, "upper": [[re, im], ...]} with the upper triangle row-major.
json to_json(const RationalHermitian& b);
RationalHermitian hermitian_from_json(const json& j);

/// {"block": <hermitian>, "tail": "num/den"}.
json to_json(const BlockScalarOperator& a);
BlockScalarOperator operator_from_json(const json& j);

/// Intervals as ["lo", "hi"]; entries as [re-interval, im-interval].
json to_json(const Interval& iv);
json to_json(const IntervalHermitian& h);

/// {"coeffs": [[re, im], ...]}; also accepts a bare array of coefficients.
json to_json(const StateVector& x);
StateVector state_from_json(const json& j);

}  // namespace omegahat::linalg
