#include "omegahat/linalg_json.hpp"

namespace omegahat::linalg {

namespace {

json complex_to_json(const RationalComplex& z) {
  return json::array({format_rational(z.re), format_rational(z.im)});
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error("expected a rational as a \"num/den\" string");
}

RationalComplex complex_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw Error("complex entries are [re, im] pairs");
    return {rational_from_json(j[0]), rational_from_json(j[1])};
  }
  return RationalComplex(rational_from_json(j));
}

}  // namespace

json to_json(const RationalHermitian& b) {
  json upper = json::array();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t j = i; j < b.dim(); ++j) upper.push_back(complex_to_json(b(i, j)));
  }
  return {{"dim", b.dim()}, {"upper", std::move(upper)}};
}

RationalHermitian hermitian_from_json(const json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  const json& upper = j.at("upper");
  if (dim == 0 || upper.size() != dim * (dim + 1) / 2) {
    throw Error("Hermitian JSON has the wrong number of upper-triangle entries");
  }
  RationalHermitian b(dim);
  std::size_t at = 0;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = r; c < dim; ++c) b.set(r, c, complex_from_json(upper[at++]));
  }
  return b;
}

json to_json(const BlockScalarOperator& a) {
  return {{"block", to_json(a.block())}, {"tail", format_rational(a.tail())}};
}

BlockScalarOperator operator_from_json(const json& j) {
  return {hermitian_from_json(j.at("block")), rational_from_json(j.at("tail"))};
}

json to_json(const Interval& iv) {
  return json::array({format_rational(iv.lo), format_rational(iv.hi)});
}

json to_json(const IntervalHermitian& h) {
  json upper = json::array();
  for (std::size_t i = 0; i < h.dim(); ++i) {
    for (std::size_t j = i; j < h.dim(); ++j) {
      upper.push_back(json::array({to_json(h(i, j).re), to_json(h(i, j).im)}));
    }
  }
  return {{"dim", h.dim()}, {"upper", std::move(upper)}, {"tail", to_json(h.tail())}};
}

json to_json(const StateVector& x) {
  json coeffs = json::array();
  for (const auto& c : x.coeffs()) coeffs.push_back(complex_to_json(c));
  return {{"coeffs", std::move(coeffs)}};
}

StateVector state_from_json(const json& j) {
  const json& arr = j.is_array() ? j : j.at("coeffs");
  std::vector<RationalComplex> coeffs;
  for (const auto& c : arr) coeffs.push_back(complex_from_json(c));
  return StateVector(std::move(coeffs));
}

}  // namespace omegahat::linalg
