// Python module omegahat._core. Exact values cross the boundary as
// "num/den" strings or JSON text; the Python package converts them.

#include "omegahat/catalog.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace omegahat;

namespace {

std::string dump(const linalg::json& j) { return j.dump(); }

linalg::BlockScalarOperator parse_operator(const std::string& text) {
  return linalg::operator_from_json(linalg::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact semi-POVM constructions: Omega, the universal semi-POVM, operator complexity bounds";

  py::register_exception<Error>(m, "OmegahatError", PyExc_ValueError);

  m.def("to_index", [](const std::string& bits) { return to_index(bits); }, py::arg("bits"));
  m.def("from_index", &from_index, py::arg("code"));
  m.def("pair", &ait::pair_strings, py::arg("s"), py::arg("t"));
  m.def("unpair", &ait::unpair, py::arg("code"));

  m.def("is_psd", [](const std::string& op) { return linalg::is_psd(parse_operator(op)); }, py::arg("operator_json"));
  m.def("loewner_leq",
        [](const std::string& a, const std::string& b) { return linalg::loewner_leq(parse_operator(a), parse_operator(b)); },
        py::arg("a_json"), py::arg("b_json"));

  m.def("omega_lower",
        [](const std::string& machine, Stage n) {
          py::gil_scoped_release release;
          return format_rational(machine::omega_lower(*catalog::machine_by_name(machine), n));
        },
        py::arg("machine"), py::arg("stage"));
  m.def("complexity_upper",
        [](const std::string& machine, Stage n, const std::string& bits) {
          py::gil_scoped_release release;
          return machine::complexity_upper(*catalog::machine_by_name(machine), n, bits);
        },
        py::arg("machine"), py::arg("stage"), py::arg("bits"));

  m.def("stream_eval",
        [](const std::string& stream, Stage n, Index s) {
          py::gil_scoped_release release;
          return dump(linalg::to_json(catalog::semipovm_by_name(stream).eval(n, s)));
        },
        py::arg("stream"), py::arg("stage"), py::arg("s"));
  m.def("validate",
        [](const std::string& stream, Stage N) {
          py::gil_scoped_release release;
          const auto r = povm::validate_semipovm(catalog::semipovm_by_name(stream), N);
          linalg::json v = linalg::json::array();
          for (const auto& e : r.violations) v.push_back({{"kind", e.kind}, {"n", e.n}, {"s", e.s}, {"detail", e.detail}});
          return dump({{"stream", stream}, {"checked_up_to", r.checked_up_to}, {"ok", r.ok()}, {"violations", v}});
        },
        py::arg("stream"), py::arg("stages"));

  m.def("omega_hat_quad",
        [](Stage n, Index window, const std::string& state) {
          const auto x = catalog::state_from_spec(state);
          py::gil_scoped_release release;
          return format_rational(linalg::quad_form(universal::omega_hat_lower(n, window), x));
        },
        py::arg("stage"), py::arg("window"), py::arg("state"));
  m.def("measurement",
        [](const std::string& stream, Stage n, const std::string& state, Index window) {
          const auto x = catalog::state_from_spec(state);
          py::gil_scoped_release release;
          return dump(povm::to_json(povm::measurement_distribution(catalog::semipovm_by_name(stream), n, x, window), x));
        },
        py::arg("stream"), py::arg("stage"), py::arg("state"), py::arg("window"));
  m.def("sample_counts",
        [](const std::string& stream, Stage n, const std::string& state, Index window, std::uint64_t seed,
           std::uint64_t count, unsigned jobs) {
          const auto x = catalog::state_from_spec(state);
          py::gil_scoped_release release;
          const auto d = povm::measurement_distribution(catalog::semipovm_by_name(stream), n, x, window);
          return povm::sample_counts(d, seed, count, jobs);
        },
        py::arg("stream"), py::arg("stage"), py::arg("state"), py::arg("window"), py::arg("seed"), py::arg("count"),
        py::arg("jobs") = 1);

  m.def("hhat",
        [](Index s, Stage n, const std::string& eps) {
          const Rational e = parse_rational(eps);
          py::gil_scoped_release release;
          return dump(ait::to_json(ait::hhat_upper(s, n, e)));
        },
        py::arg("s"), py::arg("stage"), py::arg("eps") = "1/1048576");
  m.def("scalar_floor", [](Index s) { return format_rational(universal::scalar_floor(s)); }, py::arg("s"));
}
