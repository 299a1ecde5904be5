#include "towernorm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "towernorm/folner.hpp"
#include "towernorm/geometry.hpp"
#include "towernorm/quotients.hpp"
#include "towernorm/sparse_norms.hpp"
#include "towernorm/spectra.hpp"
#include "towernorm/words.hpp"

namespace towernorm {

namespace {

// Numeric config values must consume the whole token; "2x" is an error, not 2.
template <typename T, typename Parse>
T parse_full(const std::string& text, Parse parse, const char* what) {
  std::size_t used = 0;
  T value{};
  try {
    value = parse(text, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("expected ") + what + ", got '" + text + "'", 0);
  }
  if (used != text.size()) {
    throw ParseError(std::string("trailing characters after ") + what + " in '" +
                         text + "'",
                     used);
  }
  return value;
}

int parse_int_value(const std::string& t) {
  return parse_full<int>(t, [](const std::string& s, std::size_t* u) {
    return std::stoi(s, u); }, "an integer");
}
std::int64_t parse_i64_value(const std::string& t) {
  return parse_full<std::int64_t>(t, [](const std::string& s, std::size_t* u) {
    return std::stoll(s, u); }, "an integer");
}
std::uint64_t parse_u64_value(const std::string& t) {
  return parse_full<std::uint64_t>(t, [](const std::string& s, std::size_t* u) {
    return std::stoull(s, u); }, "an unsigned integer");
}
double parse_double_value(const std::string& t) {
  return parse_full<double>(t, [](const std::string& s, std::size_t* u) {
    return std::stod(s, u); }, "a number");
}

bool parse_bool_value(const std::string& t) {
  if (t == "1" || t == "true" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "no") return false;
  throw ParseError("expected a boolean, got '" + t + "'", 0);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    if (token.empty()) continue;
    out.push_back(parse_int_value(token));
  }
  return out;
}

QuotientTower build_tower(const ExperimentConfig& cfg) {
  if (cfg.backend == "ag") {
    return build_ag_tower(cfg.levels, cfg.unwind);
  }
  if (cfg.backend == "sl2") {
    return build_sl2_tower(cfg.modulus, cfg.levels);
  }
  if (cfg.backend == "file") {
    if (cfg.path.empty()) throw ValidationError("file backend needs --path");
    std::vector<FiniteQuotient> levels;
    levels.push_back(load_quotient(cfg.path));
    levels.back().set_level(0);
    return QuotientTower("file", std::move(levels), {});
  }
  throw ValidationError("unknown backend '" + cfg.backend + "'");
}

int resolve_level(const ExperimentConfig& cfg, const QuotientTower& tower) {
  int level = cfg.level < 0 ? tower.depth() : cfg.level;
  if (level < 0 || level > tower.depth()) {
    throw ValidationError("level " + std::to_string(level) + " is out of range");
  }
  return level;
}

GrowthFunction resolve_growth(const std::string& spec, const QuotientTower& tower) {
  if (spec == "iota") return growth_iota(tower.depth() + 1);
  if (spec == "nu") return growth_nu(tower);
  GrowthFunction g = load_growth(spec);
  if (g.levels() != tower.depth() + 1) {
    throw ValidationError("growth file has " + std::to_string(g.levels()) +
                          " levels, tower has " + std::to_string(tower.depth() + 1));
  }
  return g;
}

void set_common_meta(Table& t, const ExperimentConfig& cfg) {
  t.set_meta("experiment", cfg.experiment);
  t.set_meta("backend", cfg.backend);
  t.set_meta("seed", static_cast<std::int64_t>(cfg.seed));
  t.set_meta("tol", cfg.tol);
}

void require_converged(const SpectralResult& r, const std::string& what,
                       std::vector<std::string>& failures) {
  if (!r.converged) {
    failures.push_back(what + " did not reach residual " + fmt_double(r.tol) +
                       " (got " + fmt_double(r.residual) + ")");
  }
}

PowerOptions power_options(const ExperimentConfig& cfg) {
  PowerOptions opts;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  return opts;
}

RunResult run_tower_build(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  RunResult res{Table({"level", "size", "fiber", "partial"}), {}};
  set_common_meta(res.table, cfg);
  for (int n = 0; n <= tower.depth(); ++n) {
    const FiniteQuotient& q = tower.level(n);
    std::int64_t fiber = 1;
    if (n > 0) fiber = tower.links()[n - 1].fiber_size;
    bool partial = q.cover() && q.cover()->unwound < q.cover()->base_cotree_rank;
    res.table.add_row({static_cast<std::int64_t>(n),
                       static_cast<std::int64_t>(q.size()), fiber,
                       std::string(partial ? "yes" : "no")});
  }
  ValidationReport report = tower_validate(tower);
  for (const auto& item : report.items) {
    if (!item.pass) {
      res.failures.push_back("validation: level " + std::to_string(item.level) +
                             " " + item.check +
                             (item.detail.empty() ? "" : ": " + item.detail));
    }
  }
  return res;
}

RunResult run_alpha(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  RunResult res{Table({"level", "alpha", "witness", "normal"}), {}};
  set_common_meta(res.table, cfg);
  for (int n = 0; n <= tower.depth(); ++n) {
    AlphaResult a = alpha(tower.level(n));
    if (!a.found) {
      res.failures.push_back("level " + std::to_string(n) +
                             ": no witness within the length cap");
      continue;
    }
    res.table.add_row({static_cast<std::int64_t>(n),
                       static_cast<std::int64_t>(a.alpha), a.witness.str(),
                       std::string(a.normal ? "yes" : "no")});
  }
  return res;
}

RunResult run_lift_check(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  RunResult res{Table({"level", "radius", "words", "pass", "detail"}), {}};
  set_common_meta(res.table, cfg);
  for (int n = 0; n <= tower.depth(); ++n) {
    const FiniteQuotient& q = tower.level(n);
    int radius = cfg.radius;
    if (radius < 0) {
      AlphaResult a = alpha(q);
      radius = a.found ? (a.alpha - 1) / 4 : 0;  // largest R with R < alpha/4
    }
    LiftingReport rep = check_isometric_lifting(q, radius);
    res.table.add_row({static_cast<std::int64_t>(n),
                       static_cast<std::int64_t>(rep.radius),
                       static_cast<std::int64_t>(rep.ball_words),
                       std::string(rep.pass ? "yes" : "no"), rep.detail});
    if (!rep.pass) {
      res.failures.push_back("level " + std::to_string(n) +
                             ": lifting fails at radius " +
                             std::to_string(radius) + ": " + rep.detail);
    }
  }
  return res;
}

RunResult run_spectra_norm(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  GroupAlgebraElement a = parse_element(cfg.element);
  RunResult res{Table({"level", "quantity", "value", "residual"}), {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("element", cfg.element);
  double prev = -1;
  for (int n = 0; n <= tower.depth(); ++n) {
    SpectralResult r = op_norm(assemble(a, tower.level(n)), power_options(cfg));
    require_converged(r, "norm at level " + std::to_string(n), res.failures);
    res.table.add_row({static_cast<std::int64_t>(n), std::string("lambda_norm"),
                       r.value, r.residual});
    // Levels embed into one another, so the norms can only grow.
    if (n > 0 && r.value + 2e-9 < prev) {
      res.failures.push_back("norm decreased between levels " +
                             std::to_string(n - 1) + " and " + std::to_string(n));
    }
    prev = r.value;
  }
  return res;
}

RunResult run_spectra_gap(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  GroupAlgebraElement x = parse_element(cfg.element);
  RunResult res{Table({"level", "quantity", "value", "residual"}), {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("element", cfg.element);
  for (int n = 0; n <= tower.depth(); ++n) {
    GapResult g = spectral_gap(tower.level(n), x, power_options(cfg));
    if (!g.degenerate) {
      require_converged(g.detail, "gap at level " + std::to_string(n), res.failures);
    }
    res.table.add_row({static_cast<std::int64_t>(n), std::string("mu2"), g.mu2,
                       g.detail.residual});
    res.table.add_row({static_cast<std::int64_t>(n), std::string("delta"), g.delta,
                       g.detail.residual});
  }
  return res;
}

RunResult run_spectra_rho(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  if (tower.depth() < 1) {
    throw ValidationError("rho needs a tower with at least two levels");
  }
  GroupAlgebraElement a = parse_element(cfg.element);
  RunResult res{Table({"level", "quantity", "value", "residual"}), {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("element", cfg.element);
  for (int n = 1; n <= tower.depth(); ++n) {
    SpectralResult r = rho_norm(a, tower.level(n), tower.links()[n - 1],
                                power_options(cfg));
    require_converged(r, "rho at level " + std::to_string(n), res.failures);
    SpectralResult full = op_norm(assemble(a, tower.level(n)), power_options(cfg));
    if (r.value > full.value + 1e-8) {
      res.failures.push_back("rho exceeds the full norm at level " +
                             std::to_string(n));
    }
    res.table.add_row({static_cast<std::int64_t>(n), std::string("rho_norm"),
                       r.value, r.residual});
  }
  return res;
}

RunResult run_spectra_regular(const ExperimentConfig& cfg) {
  GroupAlgebraElement a = parse_element(cfg.element);
  int radius = cfg.radius < 0 ? 8 : cfg.radius;
  RunResult res{Table({"level", "quantity", "value", "residual"}), {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("element", cfg.element);
  res.table.set_meta("note", "level column holds the ball radius");
  double prev = -1;
  for (int r = 1; r <= radius; ++r) {
    SpectralResult sr = regular_norm(a, r, power_options(cfg));
    require_converged(sr, "ball norm at radius " + std::to_string(r), res.failures);
    res.table.add_row({static_cast<std::int64_t>(r), std::string("regular_norm"),
                       sr.value, sr.residual});
    if (r > 1 && sr.value + 2e-9 < prev) {
      res.failures.push_back("ball norm decreased at radius " + std::to_string(r));
    }
    prev = sr.value;
  }
  return res;
}

RunResult run_sparse_norm(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  GroupAlgebraElement a = parse_element(cfg.element);
  int level = resolve_level(cfg, tower);
  const FiniteQuotient& q = tower.level(level);
  SparseOperator m = assemble(a, q);
  std::int64_t budget = cfg.budget;
  if (budget < 0) {
    budget = static_cast<std::int64_t>(
        std::ceil(std::sqrt(static_cast<double>(q.size()))));
  }
  // "auto" tries the exhaustive sweep and falls back to truncated power when
  // the support count is over the cap.
  std::string strategy = cfg.strategy == "auto" ? "exhaustive" : cfg.strategy;
  RunResult res{Table({"level", "budget", "strategy", "value", "support"}), {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("element", cfg.element);
  SupportValue sv;
  std::string used = strategy;
  if (strategy == "exhaustive") {
    try {
      sv = sparse_norm_exhaustive(m, budget);
    } catch (const CapExceeded&) {
      if (cfg.strategy == "exhaustive") throw;
      sv = sparse_norm_truncated(m, budget, 4, 1e-11, cfg.seed);
      used = "truncated";
    }
  } else if (strategy == "truncated") {
    sv = sparse_norm_truncated(m, budget, 4, 1e-11, cfg.seed);
  } else {
    throw ValidationError("unknown strategy '" + strategy + "' for sparse norm");
  }
  SpectralResult full = op_norm(m, power_options(cfg));
  if (sv.value > full.value + 1e-8) {
    res.failures.push_back("sparse norm exceeds the full norm");
  }
  std::string support;
  for (std::uint32_t x : sv.support) {
    if (!support.empty()) support += ' ';
    support += std::to_string(x);
  }
  res.table.add_row({static_cast<std::int64_t>(level), budget, used, sv.value,
                     support});
  return res;
}

RunResult run_sparse_deficiency(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  GroupAlgebraElement a = parse_element(cfg.element);
  int level = resolve_level(cfg, tower);
  const FiniteQuotient& q = tower.level(level);
  SparseOperator m = assemble(a, q);

  RunResult res{
      Table({"level", "budget", "strategy", "value", "bound", "support"}), {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("element", cfg.element);

  std::vector<std::uint32_t> folner_points;
  const std::vector<std::uint32_t>* seed_set = nullptr;
  std::int64_t budget = cfg.budget;
  if (cfg.strategy == "folner") {
    if (level < 1) throw ValidationError("folner strategy needs level >= 1");
    std::vector<int> ks = choose_k(tower);
    FolnerFamily family = build_A(tower, ks);
    folner_points = family.levels.at(level - 1).points;
    seed_set = &folner_points;
    if (budget < 0) budget = static_cast<std::int64_t>(folner_points.size());
  }
  if (budget < 0) {
    budget = static_cast<std::int64_t>(
        std::ceil(std::sqrt(static_cast<double>(q.size()))));
  }
  DeficiencyResult dr = min_invariance_deficiency(m, budget, cfg.strategy, seed_set);
  // The gap bound needs a self-adjoint element; fall back to the averaging
  // element when the requested one is not.
  GroupAlgebraElement gap_element =
      a.is_self_adjoint(1e-12) ? a : averaging_element(q.n_gens());
  res.table.set_meta("bound_element",
                     a.is_self_adjoint(1e-12) ? cfg.element : "averaging");
  GapResult gap = spectral_gap(q, gap_element, power_options(cfg));
  double bound = tau_lower_bound(gap.degenerate ? 0.0 : gap.delta, budget, q.size());
  if (dr.value + 1e-9 < bound) {
    res.failures.push_back("deficiency " + fmt_double(dr.value) +
                           " falls below the gap bound " + fmt_double(bound));
  }
  std::string support;
  for (std::uint32_t x : dr.support) {
    if (!support.empty()) support += ' ';
    support += std::to_string(x);
  }
  res.table.add_row({static_cast<std::int64_t>(level), budget, dr.strategy,
                     dr.value, bound, support});
  return res;
}

RunResult run_folner(const ExperimentConfig& cfg) {
  if (cfg.backend != "ag") {
    throw ValidationError("folner sets are built on the ag backend");
  }
  QuotientTower tower = build_tower(cfg);
  std::vector<int> ks;
  if (cfg.k == "auto") {
    ks = choose_k(tower);
  } else {
    ks = parse_int_list(cfg.k);
  }
  FolnerFamily family = build_A(tower, ks);
  std::vector<FolnerReportRow> rows = folner_report(family, tower, cfg.deficiency);

  std::vector<std::string> columns{"level",      "size",           "boundary",
                                   "ratio_boundary", "ratio_volume", "residual_a",
                                   "residual_b", "bound"};
  if (cfg.deficiency) columns.push_back("deficiency");
  RunResult res{Table(std::move(columns)), {}};
  set_common_meta(res.table, cfg);
  {
    std::string klist;
    for (int k : ks) {
      if (!klist.empty()) klist += ',';
      klist += std::to_string(k);
    }
    res.table.set_meta("k", klist);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FolnerReportRow& row = rows[i];
    const FolnerLevel& lvl = family.levels[i];
    std::vector<Table::Cell> cells{static_cast<std::int64_t>(row.level),
                                   row.size,
                                   row.boundary,
                                   row.ratio_boundary,
                                   row.ratio_volume,
                                   row.residual_a,
                                   row.residual_b,
                                   row.bound};
    if (cfg.deficiency) cells.push_back(row.deficiency);
    res.table.add_row(std::move(cells));
    if (lvl.boundary != lvl.boundary_formula) {
      res.failures.push_back("level " + std::to_string(row.level) +
                             ": counted boundary " + std::to_string(lvl.boundary) +
                             " != closed form " +
                             std::to_string(lvl.boundary_formula));
    }
    std::int64_t expected_size =
        static_cast<std::int64_t>(tower.level(row.level - 1).size()) *
        (1LL << lvl.k);
    if (row.size != expected_size) {
      res.failures.push_back("level " + std::to_string(row.level) +
                             ": size " + std::to_string(row.size) +
                             " != closed form " + std::to_string(expected_size));
    }
    if (std::max(row.residual_a, row.residual_b) > row.bound + 1e-12) {
      res.failures.push_back("level " + std::to_string(row.level) +
                             ": residual exceeds the boundary bound");
    }
  }
  return res;
}

RunResult run_growth(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  GrowthFunction g1 = resolve_growth(cfg.gamma, tower);
  GrowthFunction g2 = resolve_growth(cfg.gamma2, tower);
  GrowthComparison cmp = compare_growth(g1, g2);
  RunResult res{Table({"level", "gamma", "gamma2", "ratio"}), {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("prec", cmp.prec ? "yes" : "no");
  res.table.set_meta("sim", cmp.sim ? "yes" : "no");
  res.table.set_meta("leq", cmp.leq ? "yes" : "no");
  res.table.set_meta("ratio_min", cmp.ratio_min);
  res.table.set_meta("ratio_max", cmp.ratio_max);
  for (int n = 0; n < g1.levels(); ++n) {
    res.table.add_row({static_cast<std::int64_t>(n), g1.at(n), g2.at(n),
                       cmp.ratios[n]});
  }
  return res;
}

RunResult run_interpolate(const ExperimentConfig& cfg) {
  QuotientTower tower = build_tower(cfg);
  GroupAlgebraElement a = parse_element(cfg.element);
  GrowthFunction gamma = resolve_growth(cfg.gamma, tower);
  int multiplier = 1;
  if (cfg.k != "auto") multiplier = parse_int_value(cfg.k);
  if (multiplier < 1) throw ValidationError("k multiplier must be >= 1");
  int radius = cfg.radius < 0 ? 8 : cfg.radius;

  RunResult res{Table({"level", "nu", "gamma", "budget", "strategy",
                       "sparse_norm", "lambda_norm", "rho_norm", "alpha"}),
                {}};
  set_common_meta(res.table, cfg);
  res.table.set_meta("element", cfg.element);
  res.table.set_meta("k", static_cast<std::int64_t>(multiplier));

  SpectralResult reg = regular_norm(a, radius, power_options(cfg));
  require_converged(reg, "ball norm", res.failures);
  res.table.set_meta("regular_radius", static_cast<std::int64_t>(radius));
  res.table.set_meta("regular_norm", reg.value);

  for (int n = 0; n <= tower.depth(); ++n) {
    const FiniteQuotient& q = tower.level(n);
    SparseOperator m = assemble(a, q);
    std::int64_t budget =
        std::min<std::int64_t>(q.size(), multiplier * gamma.at(n));
    SupportValue sv;
    std::string used = "exhaustive";
    try {
      sv = sparse_norm_exhaustive(m, budget);
    } catch (const CapExceeded&) {
      sv = sparse_norm_truncated(m, budget, 4, 1e-11, cfg.seed);
      used = "truncated";
    }
    SpectralResult full = op_norm(m, power_options(cfg));
    require_converged(full, "norm at level " + std::to_string(n), res.failures);
    if (sv.value > full.value + 1e-8) {
      res.failures.push_back("sparse norm exceeds the full norm at level " +
                             std::to_string(n));
    }
    if (budget >= static_cast<std::int64_t>(q.size()) &&
        std::abs(sv.value - full.value) > 1e-7) {
      res.failures.push_back("full-budget sparse norm differs from the norm at level " +
                             std::to_string(n));
    }
    double rho = -1;
    if (n >= 1) {
      SpectralResult r = rho_norm(a, q, tower.links()[n - 1], power_options(cfg));
      require_converged(r, "rho at level " + std::to_string(n), res.failures);
      rho = r.value;
    }
    AlphaResult al = alpha(q);
    std::vector<Table::Cell> cells{static_cast<std::int64_t>(n),
                                   static_cast<std::int64_t>(q.size()),
                                   gamma.at(n),
                                   budget,
                                   used,
                                   sv.value,
                                   full.value};
    cells.push_back(rho < 0 ? Table::Cell(std::string("")) : Table::Cell(rho));
    cells.push_back(al.found ? Table::Cell(static_cast<std::int64_t>(al.alpha))
                             : Table::Cell(std::string(">64")));
    res.table.add_row(std::move(cells));
  }
  return res;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'", 0);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto strip = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      std::size_t e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    std::string stripped = strip(line);
    if (stripped.empty()) continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) +
                           " is not key = value",
                       0);
    }
    apply_config_entry(cfg, strip(stripped.substr(0, eq)),
                       strip(stripped.substr(eq + 1)));
  }
  return cfg;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "experiment") {
    cfg.experiment = value;
  } else if (key == "backend") {
    cfg.backend = value;
  } else if (key == "levels") {
    cfg.levels = parse_int_value(value);
  } else if (key == "unwind") {
    cfg.unwind = parse_int_list(value);
  } else if (key == "modulus") {
    cfg.modulus = parse_i64_value(value);
  } else if (key == "path") {
    cfg.path = value;
  } else if (key == "element") {
    cfg.element = value;
  } else if (key == "level") {
    cfg.level = parse_int_value(value);
  } else if (key == "radius") {
    cfg.radius = parse_int_value(value);
  } else if (key == "gamma") {
    cfg.gamma = value;
  } else if (key == "gamma2") {
    cfg.gamma2 = value;
  } else if (key == "k") {
    cfg.k = value;
  } else if (key == "budget") {
    cfg.budget = parse_i64_value(value);
  } else if (key == "strategy") {
    cfg.strategy = value;
  } else if (key == "seed") {
    cfg.seed = parse_u64_value(value);
  } else if (key == "tol") {
    cfg.tol = parse_double_value(value);
  } else if (key == "deficiency") {
    cfg.deficiency = parse_bool_value(value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "format") {
    cfg.format = value;
  } else {
    throw ParseError("unknown config key '" + key + "'", 0);
  }
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  const std::string& e = cfg.experiment;
  if (e == "tower") return run_tower_build(cfg);
  if (e == "alpha") return run_alpha(cfg);
  if (e == "lift") return run_lift_check(cfg);
  if (e == "norm") return run_spectra_norm(cfg);
  if (e == "gap") return run_spectra_gap(cfg);
  if (e == "rho") return run_spectra_rho(cfg);
  if (e == "regular") return run_spectra_regular(cfg);
  if (e == "sparse-norm") return run_sparse_norm(cfg);
  if (e == "deficiency") return run_sparse_deficiency(cfg);
  if (e == "folner") return run_folner(cfg);
  if (e == "growth") return run_growth(cfg);
  if (e == "interpolate") return run_interpolate(cfg);
  throw ValidationError("unknown experiment '" + e + "'");
}

int run_and_emit(const ExperimentConfig& cfg, std::string* rendered) {
  RunResult res = run_experiment(cfg);
  std::string text = res.table.render(cfg.format);
  if (rendered) *rendered = text;
  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + cfg.out + "'");
    out << text;
  } else {
    std::cout << text;
  }
  for (const std::string& f : res.failures) {
    std::cerr << "assertion failed: " << f << "\n";
  }
  return res.ok() ? 0 : 1;
}

}  // namespace towernorm
