#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fdetect/cli.hpp"
#include "fdetect/errors.hpp"
#include "fdetect/report.hpp"
#include "fdetect/sparsifier.hpp"
#include "fdetect/subspaces.hpp"

namespace py = pybind11;
using namespace fdetect;

namespace {

using Handle = std::shared_ptr<FlatBasis>;

Handle make_fourier(const std::vector<int>& factors, std::size_t cap) {
  return std::make_shared<FlatBasis>(fourier_basis(make_group(factors, cap)));
}

Handle make_loaded(const Matrix& m) { return std::make_shared<FlatBasis>(m, FlatBasis::Source::LoadedFile); }

FrameSystem frame_for(const Handle& b, const IndexSet& chars) { return build_frame(FourierSubspace(b, chars)); }

py::dict selection_dict(const SelectionResult& r) {
  py::dict d;
  d["order"] = r.order;
  d["selected"] = r.selected;
  d["k"] = r.k;
  d["n"] = r.n;
  d["m"] = r.m;
  d["epsilon"] = r.epsilon;
  d["achieved_one_sided"] = r.achieved_one_sided;
  d["bound_one_sided"] = r.bound_one_sided;
  d["achieved_complement"] = r.achieved_complement;
  d["complement_reference"] = r.complement_reference;
  std::vector<std::pair<double, double>> trace;
  for (const auto& p : r.potential_trace) trace.emplace_back(p.shift, p.potential);
  d["potential_trace"] = trace;
  d["domination_margins"] = r.domination_margins;
  d["feasibility_values"] = r.feasibility_values;
  d["refactorizations"] = r.refactorizations;
  d["potential_monotone"] = r.potential_monotone;
  d["strictly_dominated"] = r.strictly_dominated;
  return d;
}

py::dict twosided_dict(const TwoSidedEvaluation& e) {
  py::dict d;
  d["k"] = e.k;
  d["n"] = e.n;
  d["qpq_norm"] = e.qpq_norm;
  d["complement_norm"] = e.complement_norm;
  d["excess"] = e.excess;
  d["complement_excess"] = e.complement_excess;
  d["identity_residual"] = e.identity_residual;
  return d;
}

Objective parse_objective(const std::string& s) {
  if (s == "one-sided") return Objective::OneSided;
  if (s == "two-sided") return Objective::TwoSidedMaxExcess;
  throw ValidationError("objective must be 'one-sided' or 'two-sided'");
}

} // namespace

PYBIND11_MODULE(_fdetect, m) {
  m.doc() = "Fourier and standard subspaces on finite abelian groups";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<NoFeasibleCandidate>(m, "NoFeasibleCandidate", numerical.ptr());

  py::class_<FlatBasis, Handle>(m, "FlatBasis")
      .def_static("fourier", &make_fourier, py::arg("factors"), py::arg("order_cap") = kDefaultOrderCap,
                  "Fourier basis of Z/n1 x ... x Z/nr; row r is the normalized character r.")
      .def_static("from_matrix", &make_loaded, py::arg("matrix"), "Validate a unitary flat matrix as a basis.")
      .def_static("load", [](const std::string& path) { return std::make_shared<FlatBasis>(load_flat_basis(path)); })
      .def_property_readonly("dim", &FlatBasis::dim)
      .def_property_readonly("matrix", &FlatBasis::matrix)
      .def_property_readonly("unitarity_deviation", &FlatBasis::unitarity)
      .def_property_readonly("flatness_deviation", &FlatBasis::flatness)
      .def_property_readonly("factors", [](const FlatBasis& b) -> py::object {
        if (!b.group()) return py::none();
        return py::cast(b.group()->factors());
      })
      .def("__repr__", [](const FlatBasis& b) {
        std::ostringstream os;
        os << "FlatBasis(dim=" << b.dim() << ", source=" << to_string(b.source()) << ")";
        return os.str();
      });

  m.def("parse_index_set", &parse_index_set, py::arg("literal"), py::arg("n"));

  m.def(
      "overlap_norm",
      [](const Handle& b, const IndexSet& s, const IndexSet& t) {
        return overlap_norm(StandardSubspace(b, s), FourierSubspace(b, t));
      },
      py::arg("basis"), py::arg("set"), py::arg("chars"), "||PQ|| for E = span{e_g : g in set}, F = span of rows chars.");

  m.def(
      "single_vector_detection",
      [](const Handle& b, const IndexSet& s, std::size_t phi) { return single_vector_detection(StandardSubspace(b, s), phi); },
      py::arg("basis"), py::arg("set"), py::arg("char"));

  m.def(
      "check_uncertainty",
      [](const Handle& b, const IndexSet& s, const IndexSet& t, double tol) {
        const auto v = check_uncertainty(StandardSubspace(b, s), FourierSubspace(b, t), tol);
        py::dict d;
        d["multiplicative_applies"] = v.multiplicative_applies;
        d["additive_applies"] = v.additive_applies;
        d["overlap_norm"] = v.overlap_norm;
        d["intersects"] = v.intersects;
        d["consistent"] = v.consistent();
        return d;
      },
      py::arg("basis"), py::arg("set"), py::arg("chars"), py::arg("intersection_tol") = kIntersectionTol);

  m.def(
      "comb_example",
      [](int n) {
        const auto ex = comb_example(n);
        py::dict d;
        d["basis"] = std::const_pointer_cast<FlatBasis>(ex.basis);
        d["set"] = ex.support.indices();
        d["chars"] = ex.characters.indices();
        d["f"] = ex.f;
        return d;
      },
      py::arg("n"));

  m.def(
      "exchange_complement",
      [](const Handle& b, const IndexSet& t) {
        const auto ex = exchange_complement(FourierSubspace(b, t));
        return py::make_tuple(ex.complement.indices(), ex.sigma_min);
      },
      py::arg("basis"), py::arg("chars"), "Returns (set, sigma_min).");

  m.def(
      "build_frame", [](const Handle& b, const IndexSet& t) { return frame_for(b, t).vectors(); }, py::arg("basis"),
      py::arg("chars"), "m x n matrix whose column g is Q e_g in coordinates of F.");

  m.def(
      "select_onesided", [](const Handle& b, const IndexSet& t, std::size_t k) { return selection_dict(select_onesided(frame_for(b, t), k)); },
      py::arg("basis"), py::arg("chars"), py::arg("k"));

  m.def(
      "evaluate_twosided",
      [](const Handle& b, const IndexSet& t, const IndexSet& s) { return twosided_dict(evaluate_twosided(frame_for(b, t), s)); },
      py::arg("basis"), py::arg("chars"), py::arg("set"));

  m.def(
      "brute_force_best",
      [](const Handle& b, const IndexSet& t, std::size_t k, const std::string& objective, std::uint64_t cap) {
        const auto r = brute_force_best(frame_for(b, t), k, parse_objective(objective), cap);
        return py::make_tuple(r.selected, r.value);
      },
      py::arg("basis"), py::arg("chars"), py::arg("k"), py::arg("objective") = "one-sided",
      py::arg("enumeration_cap") = kDefaultEnumerationCap, "Returns (set, value).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Returns (exit_code, stdout, stderr).");
}
