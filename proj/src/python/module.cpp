// Python bindings for the tower/norm toolkit.  Thin wrappers: every
// computation stays in the C++ core; results cross as plain structs, vectors
// and strings.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "towernorm/experiments.hpp"
#include "towernorm/folner.hpp"
#include "towernorm/geometry.hpp"
#include "towernorm/quotients.hpp"
#include "towernorm/sparse_norms.hpp"
#include "towernorm/spectra.hpp"
#include "towernorm/tables.hpp"
#include "towernorm/util.hpp"
#include "towernorm/words.hpp"

namespace py = pybind11;
using namespace towernorm;

namespace {

PowerOptions make_opts(double tol, std::uint64_t seed) {
  PowerOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  return opts;
}

std::vector<std::pair<std::string, Complex>> term_list(
    const GroupAlgebraElement& a) {
  std::vector<std::pair<std::string, Complex>> out;
  for (const auto& [w, c] : a.terms()) out.emplace_back(w.str(), c);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite quotient towers of the rank-2 free group: quasi-regular "
            "norms, spectral gaps, sparse norms, and Folner families";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);

  py::class_<Word>(m, "Word")
      .def(py::init([](const std::string& text) { return parse_word(text); }),
           py::arg("text") = "")
      .def("__str__", &Word::str)
      .def("__repr__", [](const Word& w) { return "Word('" + w.str() + "')"; })
      .def("__mul__", [](const Word& u, const Word& v) { return u * v; })
      .def("__eq__", [](const Word& u, const Word& v) { return u == v; })
      .def("__lt__", [](const Word& u, const Word& v) { return u < v; })
      .def("__len__", &Word::length)
      .def("__hash__", [](const Word& w) { return py::hash(py::str(w.str())); })
      .def("inverse", &Word::inverse)
      .def_property_readonly("is_identity", &Word::is_identity)
      .def_property_readonly("max_generator", &Word::max_generator);

  py::class_<GroupAlgebraElement>(m, "Element")
      .def(py::init([](const std::string& text) { return parse_element(text); }),
           py::arg("text"))
      .def("__str__", &GroupAlgebraElement::str)
      .def("__repr__",
           [](const GroupAlgebraElement& a) { return "Element('" + a.str() + "')"; })
      .def("__add__",
           [](const GroupAlgebraElement& u, const GroupAlgebraElement& v) {
             return u + v;
           })
      .def("__mul__",
           [](const GroupAlgebraElement& u, const GroupAlgebraElement& v) {
             return u * v;
           })
      .def("__rmul__",
           [](const GroupAlgebraElement& a, Complex c) { return c * a; })
      .def("adjoint", &GroupAlgebraElement::adjoint)
      .def("is_self_adjoint", &GroupAlgebraElement::is_self_adjoint,
           py::arg("tol") = 1e-12)
      .def("terms", &term_list)
      .def_property_readonly("support_size", &GroupAlgebraElement::support_size)
      .def_property_readonly("support_radius", &GroupAlgebraElement::support_radius)
      .def_property_readonly("one_norm", &GroupAlgebraElement::one_norm);

  m.def("averaging_element", &averaging_element, py::arg("n_gens") = 2);

  py::class_<CoverStructure>(m, "CoverStructure")
      .def_readonly("base_vertices", &CoverStructure::base_vertices)
      .def_readonly("unwound", &CoverStructure::unwound)
      .def_readonly("base_cotree_rank", &CoverStructure::base_cotree_rank);

  py::class_<FiniteQuotient>(m, "Quotient")
      .def(py::init<int, std::vector<std::vector<std::uint32_t>>, std::uint32_t>(),
           py::arg("level"), py::arg("perms"), py::arg("basepoint") = 0)
      .def_property_readonly("size", &FiniteQuotient::size)
      .def_property_readonly("n_gens", &FiniteQuotient::n_gens)
      .def_property_readonly("level", &FiniteQuotient::level)
      .def_property_readonly("basepoint", &FiniteQuotient::basepoint)
      .def_property_readonly("cover",
                             [](const FiniteQuotient& q) {
                               return q.cover() ? py::cast(*q.cover())
                                                : py::object(py::none());
                             })
      .def("act", &FiniteQuotient::act_word, py::arg("word"), py::arg("point"))
      .def("perm", &FiniteQuotient::perm, py::arg("gen"))
      .def("__repr__", [](const FiniteQuotient& q) {
        return "Quotient(level=" + std::to_string(q.level()) +
               ", size=" + std::to_string(q.size()) + ")";
      });

  m.def("sl2_quotient",
        [](std::int64_t modulus, int level) { return sl2_quotient(modulus, kSanovGenerators, level); },
        py::arg("modulus"), py::arg("level") = 1);
  m.def("load_quotient", &load_quotient, py::arg("path"));
  m.def("save_quotient", &save_quotient, py::arg("quotient"), py::arg("path"));

  py::class_<TowerLink>(m, "TowerLink")
      .def_readonly("projection", &TowerLink::projection)
      .def_readonly("lower_size", &TowerLink::lower_size)
      .def_readonly("upper_size", &TowerLink::upper_size)
      .def_readonly("fiber_size", &TowerLink::fiber_size);

  py::class_<QuotientTower>(m, "Tower")
      .def_property_readonly("backend", &QuotientTower::backend)
      .def_property_readonly("depth", &QuotientTower::depth)
      .def("level", &QuotientTower::level, py::arg("n"),
           py::return_value_policy::copy)
      .def("link", [](const QuotientTower& t, int n) { return t.links().at(n); },
           py::arg("n"))
      .def("__len__", [](const QuotientTower& t) { return t.depth() + 1; })
      .def("__repr__", [](const QuotientTower& t) {
        return "Tower(backend='" + t.backend() +
               "', depth=" + std::to_string(t.depth()) + ")";
      });

  m.def("build_ag_tower", &build_ag_tower, py::arg("levels"),
        py::arg("unwind") = std::vector<int>{});
  m.def("build_sl2_tower",
        [](std::int64_t modulus, int levels) { return build_sl2_tower(modulus, levels); },
        py::arg("modulus"), py::arg("levels"));

  py::class_<ValidationReport::Item>(m, "ValidationItem")
      .def_readonly("check", &ValidationReport::Item::check)
      .def_readonly("level", &ValidationReport::Item::level)
      .def_readonly("pass_", &ValidationReport::Item::pass)
      .def_readonly("detail", &ValidationReport::Item::detail);
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("items", &ValidationReport::items)
      .def("all_pass", &ValidationReport::all_pass)
      .def("summary", &ValidationReport::summary);
  m.def("tower_validate", &tower_validate, py::arg("tower"));

  // Metric structure.
  m.def("distances",
        [](const FiniteQuotient& q, std::uint32_t origin) {
          return distances(q, origin).dist;
        },
        py::arg("quotient"), py::arg("origin") = 0);
  m.def("ball", &ball, py::arg("quotient"), py::arg("center"), py::arg("radius"));

  py::class_<AlphaResult>(m, "AlphaResult")
      .def_readonly("alpha", &AlphaResult::alpha)
      .def_readonly("witness", &AlphaResult::witness)
      .def_readonly("found", &AlphaResult::found)
      .def_readonly("normal", &AlphaResult::normal);
  m.def("alpha", &alpha, py::arg("quotient"), py::arg("length_cap") = 64);

  py::class_<LiftingReport>(m, "LiftingReport")
      .def_readonly("pass_", &LiftingReport::pass)
      .def_readonly("radius", &LiftingReport::radius)
      .def_readonly("ball_words", &LiftingReport::ball_words)
      .def_readonly("detail", &LiftingReport::detail);
  m.def("check_isometric_lifting", &check_isometric_lifting, py::arg("quotient"),
        py::arg("radius"), py::arg("word_cap") = 10'000'000);
  m.def("cluster_support", &cluster_support, py::arg("quotient"), py::arg("points"),
        py::arg("threshold"));

  // Operators and spectra.
  py::class_<SparseOperator>(m, "Operator")
      .def_property_readonly("dim", &SparseOperator::dim)
      .def_property_readonly("nonzeros", &SparseOperator::nonzeros)
      .def("entries",
           [](const SparseOperator& op) {
             std::vector<std::tuple<std::uint32_t, std::uint32_t, Complex>> out;
             for (const auto& [r, c, v] : op.entries()) out.emplace_back(r, c, v);
             return out;
           })
      .def("apply",
           [](const SparseOperator& op, const CVec& in) {
             if (in.size() != op.dim()) {
               throw ValidationError("vector length does not match the operator");
             }
             CVec out(in.size());
             op.apply(in, out);
             return out;
           })
      .def("__repr__", [](const SparseOperator& op) {
        return "Operator(dim=" + std::to_string(op.dim()) +
               ", nonzeros=" + std::to_string(op.nonzeros()) + ")";
      });
  m.def("assemble", &assemble, py::arg("element"), py::arg("quotient"));

  py::class_<SpectralResult>(m, "SpectralResult")
      .def_readonly("value", &SpectralResult::value)
      .def_readonly("residual", &SpectralResult::residual)
      .def_readonly("iterations", &SpectralResult::iterations)
      .def_readonly("converged", &SpectralResult::converged)
      .def("__repr__", [](const SpectralResult& r) {
        return "SpectralResult(value=" + fmt_double(r.value) +
               ", residual=" + fmt_double(r.residual) + ")";
      });

  m.def("op_norm",
        [](const SparseOperator& op, double tol, std::uint64_t seed) {
          return op_norm(op, make_opts(tol, seed));
        },
        py::arg("operator"), py::arg("tol") = 1e-9, py::arg("seed") = 1);
  m.def("trivial_vector", &trivial_vector, py::arg("quotient"));

  py::class_<GapResult>(m, "GapResult")
      .def_readonly("delta", &GapResult::delta)
      .def_readonly("mu2", &GapResult::mu2)
      .def_readonly("degenerate", &GapResult::degenerate)
      .def_readonly("detail", &GapResult::detail);
  m.def("spectral_gap",
        [](const FiniteQuotient& q, const GroupAlgebraElement& x, double tol,
           std::uint64_t seed) { return spectral_gap(q, x, make_opts(tol, seed)); },
        py::arg("quotient"), py::arg("element"), py::arg("tol") = 1e-9,
        py::arg("seed") = 1);

  m.def("uplift", &uplift, py::arg("link"), py::arg("lower"));
  m.def("project_old", &project_old, py::arg("link"), py::arg("vector"));
  m.def("rho_norm",
        [](const GroupAlgebraElement& a, const FiniteQuotient& upper,
           const TowerLink& link, double tol, std::uint64_t seed) {
          return rho_norm(a, upper, link, make_opts(tol, seed));
        },
        py::arg("element"), py::arg("upper"), py::arg("link"),
        py::arg("tol") = 1e-9, py::arg("seed") = 1);
  m.def("regular_norm",
        [](const GroupAlgebraElement& a, int radius, double tol,
           std::uint64_t seed, std::uint64_t node_cap) {
          return regular_norm(a, radius, make_opts(tol, seed), node_cap);
        },
        py::arg("element"), py::arg("radius"), py::arg("tol") = 1e-9,
        py::arg("seed") = 1, py::arg("node_cap") = 10'000'000);

  // Growth and sparse norms.
  py::class_<GrowthFunction>(m, "GrowthFunction")
      .def_readonly("values", &GrowthFunction::values)
      .def("at", &GrowthFunction::at, py::arg("level"))
      .def("__len__", &GrowthFunction::levels);
  m.def("growth_iota", &growth_iota, py::arg("levels"));
  m.def("growth_nu", &growth_nu, py::arg("tower"));
  m.def("load_growth", &load_growth, py::arg("path"));

  py::class_<GrowthComparison>(m, "GrowthComparison")
      .def_readonly("ratios", &GrowthComparison::ratios)
      .def_readonly("ratio_min", &GrowthComparison::ratio_min)
      .def_readonly("ratio_max", &GrowthComparison::ratio_max)
      .def_readonly("prec", &GrowthComparison::prec)
      .def_readonly("leq", &GrowthComparison::leq)
      .def_readonly("sim", &GrowthComparison::sim);
  m.def("compare_growth", &compare_growth, py::arg("gamma"), py::arg("gamma2"));

  m.def("sparse_norm_on_support",
        [](const SparseOperator& op, const std::vector<std::uint32_t>& T,
           double tol) { return sparse_norm_on_support(op, T, tol); },
        py::arg("operator"), py::arg("support"), py::arg("tol") = 1e-11);

  py::class_<SupportValue>(m, "SupportValue")
      .def_readonly("value", &SupportValue::value)
      .def_readonly("support", &SupportValue::support);
  m.def("sparse_norm_exhaustive", &sparse_norm_exhaustive, py::arg("operator"),
        py::arg("budget"), py::arg("cap") = 2'000'000, py::arg("tol") = 1e-11);
  m.def("sparse_norm_truncated", &sparse_norm_truncated, py::arg("operator"),
        py::arg("budget"), py::arg("restarts") = 4, py::arg("tol") = 1e-11,
        py::arg("seed") = 1);

  m.def("invariance_deficiency_on_support",
        [](const SparseOperator& op, const std::vector<std::uint32_t>& T) {
          return invariance_deficiency_on_support(op, T);
        },
        py::arg("operator"), py::arg("support"));

  py::class_<DeficiencyResult>(m, "DeficiencyResult")
      .def_readonly("value", &DeficiencyResult::value)
      .def_readonly("support", &DeficiencyResult::support)
      .def_readonly("strategy", &DeficiencyResult::strategy);
  m.def("min_invariance_deficiency",
        [](const SparseOperator& op, std::int64_t budget, const std::string& strategy,
           const std::optional<std::vector<std::uint32_t>>& seed_support,
           std::uint64_t cap) {
          return min_invariance_deficiency(
              op, budget, strategy, seed_support ? &*seed_support : nullptr, cap);
        },
        py::arg("operator"), py::arg("budget"), py::arg("strategy") = "auto",
        py::arg("seed_support") = py::none(), py::arg("cap") = 2'000'000);

  m.def("tau_lower_bound", &tau_lower_bound, py::arg("delta"), py::arg("budget"),
        py::arg("nu"));
  m.def("best_sparse_approx_error", &best_sparse_approx_error, py::arg("m"),
        py::arg("s"));
  m.def("support_invariance_check", &support_invariance_check, py::arg("quotient"),
        py::arg("word"), py::arg("support"));

  // Folner families.
  py::class_<FolnerLevel>(m, "FolnerLevel")
      .def_readonly("level", &FolnerLevel::level)
      .def_readonly("k", &FolnerLevel::k)
      .def_readonly("unwound", &FolnerLevel::unwound)
      .def_readonly("base_rank", &FolnerLevel::base_rank)
      .def_readonly("partial", &FolnerLevel::partial)
      .def_readonly("points", &FolnerLevel::points)
      .def_readonly("size", &FolnerLevel::size)
      .def_readonly("boundary", &FolnerLevel::boundary)
      .def_readonly("boundary_formula", &FolnerLevel::boundary_formula);
  py::class_<FolnerFamily>(m, "FolnerFamily")
      .def_readonly("levels", &FolnerFamily::levels);
  m.def("choose_k", &choose_k, py::arg("tower"));
  m.def("build_A", &build_A, py::arg("tower"), py::arg("k"));

  py::class_<AlmostInvariantResult>(m, "AlmostInvariantResult")
      .def_readonly("xi", &AlmostInvariantResult::xi)
      .def_readonly("residuals", &AlmostInvariantResult::residuals)
      .def_readonly("out_counts", &AlmostInvariantResult::out_counts)
      .def_readonly("bound", &AlmostInvariantResult::bound)
      .def_readonly("within_bound", &AlmostInvariantResult::within_bound);
  m.def("almost_invariant",
        [](const FolnerLevel& lvl, const QuotientTower& tower) {
          return almost_invariant(lvl, tower.level(lvl.level),
                                  tower.graphs().at(lvl.level));
        },
        py::arg("folner_level"), py::arg("tower"));

  py::class_<FolnerReportRow>(m, "FolnerReportRow")
      .def_readonly("level", &FolnerReportRow::level)
      .def_readonly("size", &FolnerReportRow::size)
      .def_readonly("boundary", &FolnerReportRow::boundary)
      .def_readonly("ratio_boundary", &FolnerReportRow::ratio_boundary)
      .def_readonly("ratio_volume", &FolnerReportRow::ratio_volume)
      .def_readonly("residual_a", &FolnerReportRow::residual_a)
      .def_readonly("residual_b", &FolnerReportRow::residual_b)
      .def_readonly("bound", &FolnerReportRow::bound)
      .def_readonly("partial", &FolnerReportRow::partial)
      .def_readonly("deficiency", &FolnerReportRow::deficiency);
  m.def("folner_report", &folner_report, py::arg("family"), py::arg("tower"),
        py::arg("with_deficiency") = false);

  // Experiment harness.
  py::class_<Table>(m, "Table")
      .def("csv", &Table::csv)
      .def("json", &Table::json)
      .def("render", &Table::render, py::arg("format"))
      .def("rows", [](const Table& t) { return t.rows(); })
      .def_property_readonly("columns", &Table::columns);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("experiment", &ExperimentConfig::experiment)
      .def_readwrite("backend", &ExperimentConfig::backend)
      .def_readwrite("levels", &ExperimentConfig::levels)
      .def_readwrite("unwind", &ExperimentConfig::unwind)
      .def_readwrite("modulus", &ExperimentConfig::modulus)
      .def_readwrite("path", &ExperimentConfig::path)
      .def_readwrite("element", &ExperimentConfig::element)
      .def_readwrite("level", &ExperimentConfig::level)
      .def_readwrite("radius", &ExperimentConfig::radius)
      .def_readwrite("gamma", &ExperimentConfig::gamma)
      .def_readwrite("gamma2", &ExperimentConfig::gamma2)
      .def_readwrite("k", &ExperimentConfig::k)
      .def_readwrite("budget", &ExperimentConfig::budget)
      .def_readwrite("strategy", &ExperimentConfig::strategy)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("tol", &ExperimentConfig::tol)
      .def_readwrite("deficiency", &ExperimentConfig::deficiency)
      .def_readwrite("out", &ExperimentConfig::out)
      .def_readwrite("format", &ExperimentConfig::format);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("table", &RunResult::table)
      .def_readonly("failures", &RunResult::failures)
      .def("ok", &RunResult::ok);
  m.def("parse_config_file", &parse_config_file, py::arg("path"));
  m.def("run_experiment", &run_experiment, py::arg("config"));
}
