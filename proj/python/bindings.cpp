#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schemefactor/assoc.hpp"
#include "schemefactor/factor.hpp"
#include "schemefactor/mscheme.hpp"

namespace py = pybind11;
using namespace sf;

namespace {

Poly make_poly(u64 p, unsigned d, const std::vector<long long>& coeffs) {
  return Poly::from_ints(FieldCtx::make(p, d), coeffs);
}

py::dict result_dict(const FactorResult& r) {
  py::dict out;
  out["m_used"] = r.m_used;
  out["log"] = log_to_json(r.log);
  if (r.status == FactorResult::Status::Factored) {
    out["status"] = "factored";
    out["factor"] = r.factor.coeffs;
    std::vector<std::vector<u64>> parts;
    for (const Poly& g : r.parts) parts.push_back(g.coeffs);
    out["parts"] = parts;
  } else {
    out["status"] = "stuck";
    out["certificate_valid"] = r.certificate->valid();
    out["ideals_per_level"] = r.certificate->level_dims;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_schemefactor, m) {
  m.doc() = "Deterministic factoring of split polynomials over finite fields";

  static py::exception<Error> error(m, "SchemeFactorError");
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def(
      "factor",
      [](u64 p, const std::vector<long long>& coeffs, unsigned mdepth, unsigned d) {
        return result_dict(iks_factor(make_poly(p, d, coeffs), mdepth));
      },
      py::arg("p"), py::arg("coeffs"), py::arg("m") = 4, py::arg("d") = 1,
      "Factor a monic split squarefree polynomial given low-to-high integer coefficients.");
  m.def(
      "prime_degree_factor",
      [](u64 p, const std::vector<long long>& coeffs, u64 r, u64 ell, unsigned d) {
        return result_dict(prime_degree_factor(make_poly(p, d, coeffs), r, ell));
      },
      py::arg("p"), py::arg("coeffs"), py::arg("r"), py::arg("ell") = 2, py::arg("d") = 1);
  m.def("smooth_divisor", &smooth_divisor, py::arg("n"), py::arg("r"));
  m.def("linnik_p1s", &linnik_p1s, py::arg("s"), py::arg("cap_factor") = 10);
  m.def(
      "cyclotomic_valencies",
      [](u64 p, u64 e) { return intersection_tensor(cyclotomic_scheme(p, e)).valency; }, py::arg("p"),
      py::arg("e"));
  m.def(
      "orbit_scan",
      [](const std::string& group, unsigned mdepth) {
        for (const auto& g : group_catalog()) {
          if (g.name != group) continue;
          const MCollection pi = orbit_mscheme(g.generators, g.degree, std::min(mdepth, g.degree));
          const PropertyReport rep = check_properties(pi);
          py::dict out;
          out["scheme"] = rep.is_scheme();
          out["homogeneous"] = rep.homogeneous;
          out["antisymmetric"] = rep.is_antisymmetric();
          out["matchings"] = rep.is_scheme() ? find_matchings(pi).size() : 0;
          return out;
        }
        fail(ErrorKind::InvalidArgument, "unknown catalog group " + group);
      },
      py::arg("group"), py::arg("m") = 4);
}
