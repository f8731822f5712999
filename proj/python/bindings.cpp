#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

#include "ebv/ebv.hpp"

namespace py = pybind11;
using nparray = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

ebv::DenseMatrix to_matrix(const nparray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw ebv::ParameterError("expected a square 2-D array");
  }
  const auto n = static_cast<std::size_t>(a.shape(0));
  return ebv::DenseMatrix(n, std::vector<double>(a.data(), a.data() + n * n));
}

ebv::Vector to_vector(const nparray& b) {
  if (b.ndim() != 1) throw ebv::ParameterError("expected a 1-D array");
  return ebv::Vector(std::vector<double>(b.data(), b.data() + b.shape(0)));
}

nparray from_matrix(std::span<const double> values, std::size_t n) {
  nparray out({n, n});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

nparray from_vector(const ebv::Vector& v) {
  nparray out(v.size());
  std::copy(v.values().begin(), v.values().end(), out.mutable_data());
  return out;
}

py::dict counters_dict(const ebv::WorkCounters& c) {
  py::dict d;
  d["madds"] = c.madds;
  d["divs"] = c.divs;
  d["barriers"] = c.barriers;
  return d;
}

ebv::ExecConfig exec_config(std::size_t workers, bool zero_skip) {
  ebv::ExecConfig cfg;
  cfg.workers = workers;
  cfg.zero_skip = zero_skip;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_ebv, m) {
  m.doc() = "Equal bi-vectorized parallel LU solver";

  py::register_exception<ebv::ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<ebv::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ebv::SingularDiagonalError>(m, "SingularDiagonalError",
                                                     PyExc_ArithmeticError);
  py::register_exception<ebv::SingularPivotError>(m, "SingularPivotError", PyExc_ArithmeticError);

  m.def("generate_dense",
        [](std::size_t n, std::uint64_t seed) {
          const auto a = ebv::generate_dense(n, seed);
          return from_matrix(a.values(), n);
        },
        py::arg("n"), py::arg("seed") = 42);

  m.def("generate_sparse",
        [](std::size_t n, double density, std::uint64_t seed) {
          const auto a = ebv::to_dense(ebv::generate_sparse(n, density, seed));
          return from_matrix(a.values(), n);
        },
        py::arg("n"), py::arg("density"), py::arg("seed") = 42,
        "Sparse generator output, densified.");

  m.def("load_matrix_market",
        [](const std::string& text) {
          const auto a = ebv::to_dense(ebv::load_matrix_market(text));
          return from_matrix(a.values(), a.n());
        },
        py::arg("text"), "Parse Matrix Market text into a dense array.");

  m.def("normalize_unit_diagonal",
        [](const nparray& a) {
          auto [m_out, scaling] = ebv::normalize_unit_diagonal(to_matrix(a));
          std::vector<double> scales(scaling.scales().begin(), scaling.scales().end());
          return py::make_tuple(from_matrix(m_out.values(), m_out.n()), scales);
        },
        py::arg("a"));

  m.def("residual_inf",
        [](const nparray& a, const nparray& x, const nparray& b) {
          return ebv::residual_inf(to_matrix(a), to_vector(x), to_vector(b));
        },
        py::arg("a"), py::arg("x"), py::arg("b"));

  m.def("factorize_seq",
        [](const nparray& a, std::optional<double> threshold) {
          const auto mat = to_matrix(a);
          const auto policy = threshold ? ebv::PivotPolicy{*threshold}
                                        : ebv::PivotPolicy::for_matrix(mat);
          const auto f = ebv::factorize_seq(mat, policy);
          return from_matrix(f.packed(), f.n());
        },
        py::arg("a"), py::arg("threshold") = py::none(),
        "Packed L\\U factors (unit lower diagonal implicit).");

  m.def("solve_seq",
        [](const nparray& a, const nparray& b) {
          return from_vector(ebv::solve_seq(to_matrix(a), to_vector(b)));
        },
        py::arg("a"), py::arg("b"));

  m.def("factorize_par",
        [](const nparray& a, std::size_t workers, bool zero_skip) {
          const auto mat = to_matrix(a);
          const auto plan = ebv::make_plan(mat.n(), workers);
          ebv::ParFactorization r;
          {
            py::gil_scoped_release release;
            r = ebv::factorize_par(mat, plan, exec_config(workers, zero_skip));
          }
          return py::make_tuple(from_matrix(r.factors.packed(), r.factors.n()),
                                counters_dict(r.counters));
        },
        py::arg("a"), py::arg("workers") = 1, py::arg("zero_skip") = false);

  m.def("solve",
        [](const nparray& a, const nparray& b, std::size_t workers, bool zero_skip) {
          const auto mat = to_matrix(a);
          const auto rhs = to_vector(b);
          ebv::EbvSolve r;
          {
            py::gil_scoped_release release;
            r = ebv::solve_ebv(mat, rhs, exec_config(workers, zero_skip));
          }
          py::dict counters;
          counters["factorize"] = counters_dict(r.factorize);
          counters["solve"] = counters_dict(r.solve);
          return py::make_tuple(from_vector(r.x), counters);
        },
        py::arg("a"), py::arg("b"), py::arg("workers") = 1, py::arg("zero_skip") = false,
        "Solve A x = b with the equal bi-vectorized parallel solver.");

  m.def("plan_dump", [](std::size_t n, std::size_t workers) {
    return ebv::dump_plan(ebv::assign(ebv::equalize(ebv::bivectorize(n), n), workers));
  }, py::arg("n"), py::arg("workers"));

  m.def("plan_stats",
        [](std::size_t n, std::size_t workers) {
          const auto s = ebv::plan_stats(ebv::assign(ebv::equalize(ebv::bivectorize(n), n), workers));
          py::dict d;
          d["per_worker_length"] = s.per_worker_length;
          d["per_worker_units"] = s.per_worker_units;
          return d;
        },
        py::arg("n"), py::arg("workers"));
}
