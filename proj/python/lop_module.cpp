#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lop/pipeline.hpp"

namespace py = pybind11;

namespace {

lop::RunConfig make_config(unsigned p, long nminus, long nplus, std::vector<long> weights, long precision,
                           const std::string& cache_dir, std::uint64_t seed, int splitting_variant,
                           int base_point_variant, int base_vertex_variant) {
  lop::RunConfig c;
  c.p = p;
  c.nminus = nminus;
  c.nplus = nplus;
  c.weights = std::move(weights);
  c.precision = precision;
  c.cache_dir = cache_dir;
  c.seed = seed;
  c.splitting_variant = splitting_variant;
  c.base_point_variant = base_point_variant;
  c.base_vertex_variant = base_vertex_variant;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "p-adic L-operators of quaternionic arithmetic groups";

  py::register_exception<lop::PrecisionError>(m, "PrecisionError");
  py::register_exception<lop::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<lop::BudgetExceeded>(m, "BudgetExceeded");

  m.def(
      "fdomain",
      [](unsigned p, long nminus, long nplus, const std::string& cache_dir, std::uint64_t seed, int splitting) {
        lop::Session s(make_config(p, nminus, nplus, {2}, 10, cache_dir, seed, splitting, 0, 0));
        py::gil_scoped_release release;
        return lop::fdomain_report(s);
      },
      py::arg("p"), py::arg("nminus"), py::arg("nplus") = 1, py::arg("cache_dir") = "", py::arg("seed") = 0,
      py::arg("splitting_variant") = 0);

  m.def(
      "basis",
      [](unsigned p, long nminus, std::vector<long> weights, long prec, long nplus, const std::string& cache_dir) {
        lop::Session s(make_config(p, nminus, nplus, std::move(weights), prec, cache_dir, 0, 0, 0, 0));
        py::gil_scoped_release release;
        return lop::basis_report(s, lop::Deadline(0));
      },
      py::arg("p"), py::arg("nminus"), py::arg("weights"), py::arg("prec") = 10, py::arg("nplus") = 1,
      py::arg("cache_dir") = "");

  m.def(
      "linv",
      [](unsigned p, long nminus, long weight, long prec, long nplus, const std::string& cache_dir, int splitting,
         int base_point, int base_vertex) {
        lop::Session s(make_config(p, nminus, nplus, {weight}, prec, cache_dir, 0, splitting, base_point, base_vertex));
        py::gil_scoped_release release;
        return lop::linv_report(s, lop::Deadline(0));
      },
      py::arg("p"), py::arg("nminus"), py::arg("weight"), py::arg("prec") = 10, py::arg("nplus") = 1,
      py::arg("cache_dir") = "", py::arg("splitting_variant") = 0, py::arg("base_point_variant") = 0,
      py::arg("base_vertex_variant") = 0);

  m.def(
      "slopes",
      [](unsigned p, long nminus, std::vector<long> weights, long prec, long nplus, const std::string& cache_dir,
         double budget_secs) {
        auto c = make_config(p, nminus, nplus, std::move(weights), prec, cache_dir, 0, 0, 0, 0);
        c.budget_secs = budget_secs;
        lop::Session s(c);
        py::gil_scoped_release release;
        return lop::slopes_report(s, lop::Deadline(budget_secs));
      },
      py::arg("p"), py::arg("nminus"), py::arg("weights"), py::arg("prec") = 20, py::arg("nplus") = 1,
      py::arg("cache_dir") = "", py::arg("budget_secs") = 0.0);

  m.def("render_table", &lop::render_table, py::arg("command"), py::arg("json"));

  py::class_<lop::Report>(m, "Report")
      .def_readonly("json", &lop::Report::json)
      .def_readonly("exit_code", &lop::Report::exit_code);
}
