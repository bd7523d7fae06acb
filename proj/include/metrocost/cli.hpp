#pragma once

// Command implementations behind the metrocost executable. Each command takes
// a validated config and returns its result both as JSON and as a CSV table.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metrocost/io.hpp"

namespace metrocost::cli {

enum class Format { json, csv };

inline Format format_from_string(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw InvalidArgument("unknown output format '" + s + "' (expected json or csv)");
}

struct GlobalConfig {
  std::string output;  // empty: standard output
  Format format = Format::json;
  std::uint64_t seed = 20220401;
  int threads = 1;

  SearchOptions search() const {
    SearchOptions o;
    o.seed = seed;
    o.threads = threads;
    return o;
  }
};

struct CommandResult {
  Json json;
  CsvTable table{{}};

  std::string render(Format f) const { return f == Format::json ? json.dump(2) + "\n" : table.str(); }
};

inline CsvTable key_value_table(const Json& flat) {
  CsvTable t({"key", "value"});
  for (const auto& [k, v] : flat.items()) {
    if (v.is_object() || v.is_array()) continue;
    std::string s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_boolean()) s = v.get<bool>() ? "true" : "false";
    else if (v.is_number_integer()) s = std::to_string(v.get<long long>());
    else if (v.is_number()) s = format_double(v.get<double>());
    t.add_row({k, s});
  }
  return t;
}

// ---------------------------------------------------------------------------
// qfi

struct QfiConfig {
  std::string model = "fixed-atoms";  // fixed-atoms | free-atoms | pauli | appendix-b
  int p = 1;
  int n = 1;
  std::string state;                  // uniform | noon | superposed-noon | basis:<k>; empty = model default
  std::string components = "xyz";     // pauli
  double alpha = 1.0;                 // appendix-b
  double beta = 0.5;
  std::vector<double> theta;          // evaluation point, default 0
};

inline GeneratorSet qfi_generators(const QfiConfig& c) {
  if (c.model == "fixed-atoms") return build_fixed_atom_generators(c.p);
  if (c.model == "free-atoms") return build_free_atom_generators(c.p);
  if (c.model == "pauli") return build_pauli_generators(c.components);
  if (c.model == "appendix-b") return build_skewed_pair_generators(c.alpha, c.beta);
  throw InvalidArgument("unknown model '" + c.model + "' (expected fixed-atoms, free-atoms, pauli or appendix-b)");
}

inline PureState qfi_state(const QfiConfig& c, const GeneratorSet& gens) {
  const Eigen::Index d = gens.dim();
  const std::string s = c.state.empty() ? (c.model == "pauli" ? "basis:0" : "uniform") : c.state;
  if (s.rfind("basis:", 0) == 0) {
    long k = 0;
    try {
      k = std::stol(s.substr(6));
    } catch (const std::exception&) {
      throw InvalidArgument("bad basis state '" + s + "'");
    }
    return PureState::basis(d, k);
  }
  if (s == "superposed-noon") {
    detail::require(c.model == "free-atoms", "state superposed-noon requires model free-atoms");
    return superposed_noon_state(c.p, c.n);
  }
  if (s == "noon") {
    // Product of single-atom n00n states; for one atom, (|0> + |1>)/sqrt(2).
    detail::require(c.model == "fixed-atoms", "state noon requires model fixed-atoms (use superposed-noon for free-atoms)");
    return PureState(CVector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0)));
  }
  if (s == "uniform") return PureState(CVector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0)));
  throw InvalidArgument("unknown state '" + s + "' (expected uniform, noon, superposed-noon or basis:<k>)");
}

inline CommandResult cmd_qfi(const QfiConfig& c) {
  detail::require(c.p >= 1 && c.n >= 1, "qfi: p and n must be >= 1");
  const GeneratorSet gens = qfi_generators(c);
  const PureState psi = qfi_state(c, gens);
  RVector theta = RVector::Zero(gens.size());
  if (!c.theta.empty()) {
    detail::require(static_cast<int>(c.theta.size()) == gens.size(), "qfi: theta needs one value per parameter");
    for (int i = 0; i < gens.size(); ++i) theta(i) = c.theta[static_cast<std::size_t>(i)];
  }
  const QfiMatrix f = qfi_pure(gens, theta, psi, c.n);
  const SaturabilityReport sat = saturability(gens, theta, psi, c.n);

  CommandResult r;
  r.json = {{"model", c.model},
            {"p", gens.size()},
            {"n", c.n},
            {"F", to_json(f)},
            {"trace_inverse", json_number(trace_inverse(f))},
            {"saturable", sat.saturable},
            {"imag_max", json_number(sat.imag_max)}};
  CsvTable t({"quantity", "i", "j", "value"});
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.size(); ++j) t.add_row({"F", std::to_string(i), std::to_string(j), format_double(f(i, j))});
  t.add_row({"trace_inverse", "", "", format_double(trace_inverse(f))});
  t.add_row({"imag_max", "", "", format_double(sat.imag_max)});
  t.add_row({"saturable", "", "", sat.saturable ? "true" : "false"});
  r.table = std::move(t);
  return r;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsConfig {
  std::string model = "fixed-atoms";  // catalog models, or appendix-b
  std::string paradigm = "cr";
  int p = 4;
  long n = 100;
  long k = 1;
  long N = 1000;
  double alpha = 1.0;
  double beta = 0.5;
  bool optimize = false;  // add a SEP+ reparametrization search
};

inline std::string catalog_name(const std::string& model) {
  if (model == "fixed-atoms") return "fixed_atoms";
  if (model == "free-atoms") return "free_atoms";
  if (model == "interferometer") return "interferometer_p_arms";
  std::string out = model;
  for (char& ch : out)
    if (ch == '-') ch = '_';
  return out;
}

inline std::vector<CatalogEntry> bounds_entries(const BoundsConfig& c, const SearchOptions& opt) {
  const Paradigm par = paradigm_from_string(c.paradigm);
  const ResourceBudget budget = par == Paradigm::CR ? ResourceBudget::cr(c.n, c.k) : ResourceBudget::mm(c.N);
  std::vector<CatalogEntry> out;
  std::optional<GeneratorSet> gens;

  if (c.model == "appendix-b") {
    gens = build_skewed_pair_generators(c.alpha, c.beta);
    const int alpha = scaling_alpha(par);
    const double sep = sep_plus_objective(RMatrix::Identity(2, 2), nuisance_variance_oracle(*gens, par, opt), alpha);
    out.push_back({make_estimate(par, Strategy::SEP, sep, alpha + 1, BoundStatus::exact_asymptotic,
                                 "original parametrization, other parameter as nuisance"),
                   EntrySource::computed});
    RMatrix seed(2, 2);
    seed << c.alpha, c.beta, c.beta, c.alpha;
    SepPlusResult plus = sep_plus_optimize(*gens, budget, opt, {RMatrix(seed.inverse())});
    out.push_back({plus.estimate, EntrySource::computed});
    if (par == Paradigm::CR) {
      const PureState psi(CVector::Constant(4, Complex(0.5, 0.0)));
      const double t = trace_inverse(qfi_pure(*gens, RVector::Zero(2), psi));
      out.push_back({make_estimate(par, Strategy::JNT, t, 0, BoundStatus::exact_asymptotic, "tr(F^-1) of the uniform probe",
                                   "2/(a-b)^2 + 2/(a+b)^2"),
                     EntrySource::computed});
    }
    out.push_back({jnt_lower_bound(*gens, budget, opt), EntrySource::computed});
    out.back().estimate.variant = "bound";
    return out;
  }

  const ModelRecord rec = catalog_model(catalog_name(c.model), c.p, static_cast<int>(std::min<long>(c.n, 1 << 20)), opt);
  for (const auto& e : rec.entries)
    if (e.estimate.paradigm == par) out.push_back(e);

  if (c.optimize) {
    if (rec.name == "fixed_atoms") gens = build_fixed_atom_generators(c.p);
    else if (rec.name == "free_atoms") gens = build_free_atom_generators(c.p);
    else if (rec.name == "pauli3") gens = build_pauli_generators("xyz");
    else if (rec.name == "pauli2") gens = build_pauli_generators("xy");
    else if (rec.name == "pauli1") gens = build_pauli_generators("z");
    else throw UnsupportedConfiguration("bounds --optimize needs a generator-level model");
    CatalogEntry e{sep_plus_optimize(*gens, budget, opt).estimate, EntrySource::computed};
    e.estimate.variant = "search";
    out.push_back(e);
  }
  return out;
}

inline CommandResult cmd_bounds(const BoundsConfig& c, const SearchOptions& opt = {}) {
  detail::require(c.p >= 1 && c.n >= 1 && c.k >= 1 && c.N >= 1, "bounds: p, n, k and N must be >= 1");
  const std::vector<CatalogEntry> entries = bounds_entries(c, opt);
  const Paradigm par = paradigm_from_string(c.paradigm);
  CommandResult r;
  r.json = Json::array();
  CsvTable t({"strategy", "variant", "constant", "effective_constant", "cost", "exp_p", "exp_n", "exp_k", "exp_N", "status",
              "source", "formula", "bracket_lo", "bracket_hi", "provenance"});
  const ResourceBudget budget = par == Paradigm::CR ? ResourceBudget::cr(c.n, c.k) : ResourceBudget::mm(c.N);
  for (const auto& e : entries) {
    Json j = to_json(e, c.n);
    j["cost"] = json_number(e.estimate.cost(budget));
    r.json.push_back(j);
    const CostExponents x = e.estimate.exponents();
    t.add_row({to_string(e.estimate.strategy), e.estimate.variant, format_double(e.estimate.constant),
               format_double(e.estimate.effective_constant(c.n)), format_double(e.estimate.cost(budget)), std::to_string(x.p),
               std::to_string(x.n), std::to_string(x.k), std::to_string(x.N), to_string(e.estimate.status), to_string(e.source),
               e.estimate.formula, e.estimate.bracket_lo ? format_double(*e.estimate.bracket_lo) : "",
               e.estimate.bracket_hi ? format_double(*e.estimate.bracket_hi) : "", e.estimate.provenance});
  }
  r.table = std::move(t);
  return r;
}

// ---------------------------------------------------------------------------
// variational

struct SimplexConfig {
  int p = 2;
  int grid = 0;  // 0: per-p default
  int max_iterations = 500;
};

inline CommandResult cmd_variational_simplex(const SimplexConfig& c) {
  detail::require(c.max_iterations >= 1, "variational simplex: max iterations must be >= 1");
  const int grid = c.grid > 0 ? c.grid : default_simplex_grid(c.p);
  SimplexSolverOptions opt;
  opt.max_iterations = c.max_iterations;
  const SimplexSpectrum s = simplex_ground_energy(c.p, grid, opt);
  CommandResult r;
  r.json = to_json(s);
  r.json["grid"] = grid;
  r.json["converged"] = true;
  r.table = key_value_table(r.json);
  return r;
}

struct AiryConfig {
  double tail_cutoff = 30.0;
};

inline CommandResult cmd_variational_airy(const AiryConfig& c) {
  const AiryBoundResult a = airy_lower_bound(c.tail_cutoff);
  CommandResult r;
  r.json = to_json(a);
  r.json["tail_cutoff"] = json_number(c.tail_cutoff);
  r.table = key_value_table(r.json);
  return r;
}

struct BallConfig {
  int p = 2;
};

inline CommandResult cmd_variational_ball(const BallConfig& c) {
  const double e = ball_upper_bound(c.p);
  const double nu = c.p / 2.0 - 1.0;
  CommandResult r;
  r.json = {{"p", c.p},
            {"bessel_order", json_number(nu)},
            {"bessel_zero", json_number(bessel_j_first_zero(nu))},
            {"E", json_number(e)},
            {"E_over_p3", json_number(e / (static_cast<double>(c.p) * c.p * c.p))}};
  r.table = key_value_table(r.json);
  return r;
}

struct PhaseConfig {
  std::string family = "sin";  // sin | noon
  int N = 20;
  long mc_samples = 0;  // 0: analytic only
  int pdf_grid = kDefaultPhaseGrid;
};

inline PhaseStateCoefficients phase_family(const std::string& family, int N) {
  if (family == "sin") return sin_coefficients(N);
  if (family == "noon") return noon_coefficients(N);
  throw InvalidArgument("unknown phase state family '" + family + "' (expected sin or noon)");
}

inline CommandResult cmd_variational_phase(const PhaseConfig& c, std::uint64_t seed) {
  const PhaseStateCoefficients coeffs = phase_family(c.family, c.N);
  const double analytic = phase_cost_analytic(coeffs);
  CommandResult r;
  r.json = {{"family", c.family},
            {"N", c.N},
            {"analytic", json_number(analytic)},
            {"N2_cost", json_number(static_cast<double>(c.N) * c.N * analytic)}};
  if (c.family == "sin") r.json["closed_form"] = json_number(2.0 * (1.0 - std::cos(kPi / (c.N + 2.0))));
  if (c.mc_samples > 0) {
    const PhaseMeasurementModel model(coeffs, c.pdf_grid);
    const MonteCarloEstimate mc = phase_cost_monte_carlo(model, c.mc_samples, seed);
    r.json["mc_samples"] = mc.samples;
    r.json["seed"] = seed;
    r.json["pdf_grid"] = c.pdf_grid;
    r.json["mc_mean"] = json_number(mc.mean);
    r.json["mc_stderr"] = json_number(mc.standard_error);
    r.json["mc_z"] = json_number(mc.standard_error > 0 ? (mc.mean - analytic) / mc.standard_error : 0.0);
  }
  r.table = key_value_table(r.json);
  return r;
}

// ---------------------------------------------------------------------------
// table

struct TableConfig {
  int p = 4;
  int n = 100;
};

inline CommandResult cmd_table(const TableConfig& c, const SearchOptions& opt = {}) {
  const std::vector<ModelRecord> records = table_one(c.p, c.n, opt);
  CommandResult r;
  Json models = Json::array();
  CsvTable t({"model", "p", "paradigm", "strategy", "variant", "constant", "effective_constant", "formula", "status", "source",
              "bracket_lo", "bracket_hi", "n_offset", "provenance"});
  for (const auto& rec : records) {
    models.push_back(to_json(rec, c.n));
    for (const auto& e : rec.entries) {
      const CostEstimate& x = e.estimate;
      t.add_row({rec.name, std::to_string(rec.p), to_string(x.paradigm), to_string(x.strategy), x.variant,
                 format_double(x.constant), format_double(x.effective_constant(c.n)), x.formula, to_string(x.status),
                 to_string(e.source), x.bracket_lo ? format_double(*x.bracket_lo) : "",
                 x.bracket_hi ? format_double(*x.bracket_hi) : "", format_double(x.n_offset), x.provenance});
    }
  }
  r.json = {{"p", c.p}, {"n", c.n}, {"models", models}};
  r.table = std::move(t);
  return r;
}

// ---------------------------------------------------------------------------
// figure

struct FigureBallConfig {
  int p_max = 20;
};

inline CommandResult cmd_figure_ball(const FigureBallConfig& c) {
  const auto rows = figure_ball_data(c.p_max);
  CommandResult r;
  r.json = Json::array();
  CsvTable t({"row_type", "p", "sep_norm", "ball_norm", "airy_norm", "analytic_norm"});
  for (const auto& row : rows) {
    const std::string type = row.analytic ? "analytic" : "curve";
    Json j{{"row_type", type},
           {"p", row.p},
           {"sep_norm", json_number(row.sep_norm)},
           {"ball_norm", json_number(row.ball_norm)},
           {"airy_norm", json_number(row.airy_norm)}};
    j["analytic_norm"] = row.analytic ? json_number(row.analytic_norm) : Json();
    r.json.push_back(j);
    t.add_row({type, std::to_string(row.p), format_double(row.sep_norm), format_double(row.ball_norm),
               format_double(row.airy_norm), row.analytic ? format_double(row.analytic_norm) : ""});
  }
  r.table = std::move(t);
  return r;
}

struct FigureRatioConfig {
  double alpha = 1.0;
  int beta_steps = 50;
  int angle_grid = 360;
};

inline CommandResult cmd_figure_ratio(const FigureRatioConfig& c) {
  const auto rows = figure_ratio_data(c.alpha, uniform_beta_grid(c.alpha, c.beta_steps), c.angle_grid);
  CommandResult r;
  r.json = Json::array();
  CsvTable t({"beta_over_alpha", "orthogonal", "general", "ratio"});
  for (const auto& row : rows) {
    r.json.push_back({{"beta_over_alpha", json_number(row.beta_over_alpha)},
                      {"orthogonal", json_number(row.orthogonal)},
                      {"general", json_number(row.general)},
                      {"ratio", json_number(row.ratio)}});
    t.add_row({format_double(row.beta_over_alpha), format_double(row.orthogonal), format_double(row.general),
               format_double(row.ratio)});
  }
  r.table = std::move(t);
  return r;
}

}  // namespace metrocost::cli
