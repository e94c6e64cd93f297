// lclab command-line front end: certification runs, transform construction,
// inversion experiments and the stochastic drivers, with a machine-readable
// JSON report for every invocation.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lclab/berwald.hpp"
#include "lclab/discrete_pl.hpp"
#include "lclab/laplace.hpp"
#include "lclab/measure.hpp"
#include "lclab/measure_io.hpp"
#include "lclab/parallel.hpp"
#include "lclab/poisson.hpp"
#include "lclab/seq.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Configuration problems (bad flags, unreadable inputs) exit with 2;
// failed assertions exit with 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  bool pass = true;
  std::string failure;

  void require(bool ok, const std::string& detail) {
    if (!ok && pass) {
      pass = false;
      failure = detail;
    }
  }
};

ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

lclab::HalfLineMeasure resolve_measure_cfg(const std::string& arg) {
  try {
    return lclab::resolve_measure(arg);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

lclab::Quadruple parse_quad(const std::string& text) {
  int vals[4];
  size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    try {
      vals[i] = std::stoi(tok);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse quadruple '" + text + "'");
    }
    if (comma == std::string::npos && i < 3)
      throw ConfigError("quadruple needs four comma-separated integers");
    pos = comma + 1;
  }
  try {
    return lclab::Quadruple(vals[0], vals[1], vals[2], vals[3]);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

long long parse_int_key(const std::string& key) {
  try {
    size_t used = 0;
    const long long v = std::stoll(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("map keys must be integers, got '" + key + "'");
  }
}

lclab::Payoff parse_payoff(const json& j) {
  try {
    lclab::Payoff payoff;
    if (!j.contains("beyond")) throw ConfigError("payoff file needs a \"beyond\" constant");
    payoff.beyond = j.at("beyond").get<double>();
    long long max_key = -1;
    const auto& values = j.value("values", json::object());
    for (const auto& [key, value] : values.items()) {
      (void)value;
      const long long k = parse_int_key(key);
      if (k < 0) throw ConfigError("payoff keys must be non-negative");
      max_key = std::max(max_key, k);
    }
    payoff.values.assign(static_cast<size_t>(max_key + 1), payoff.beyond);
    for (const auto& [key, value] : values.items())
      payoff.values[static_cast<size_t>(parse_int_key(key))] = value.get<double>();
    return payoff;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad payoff file: ") + e.what());
  }
}

double value_or_neg_inf(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "-inf")
      return -std::numeric_limits<double>::infinity();
    throw ConfigError("window values must be numbers or \"-inf\"");
  }
  return v.get<double>();
}

lclab::IntFn parse_intfn(const json& j) {
  if (!j.is_object() || j.empty())
    throw ConfigError("window function must be a non-empty integer->value map");
  long long lo = std::numeric_limits<long long>::max();
  long long hi = std::numeric_limits<long long>::min();
  for (const auto& [key, value] : j.items()) {
    (void)value;
    const long long x = parse_int_key(key);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  lclab::IntFn fn;
  fn.lo = lo;
  fn.vals.assign(static_cast<size_t>(hi - lo + 1),
                 -std::numeric_limits<double>::infinity());
  for (const auto& [key, value] : j.items())
    fn.vals[static_cast<size_t>(parse_int_key(key) - lo)] = value_or_neg_inf(value);
  return fn;
}

lclab::IntensityPolicy parse_policy(const std::string& spec,
                                    const std::optional<lclab::Payoff>& payoff,
                                    double horizon) {
  if (spec == "optimal") {
    if (!payoff) throw ConfigError("--policy optimal needs a payoff");
    return lclab::optimal_policy(*payoff, horizon);
  }
  if (spec.rfind("constant:", 0) == 0) {
    try {
      return lclab::IntensityPolicy::constant(std::stod(spec.substr(9)));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse '" + spec + "'");
    }
  }
  const json j = load_json_file(spec);
  if (!j.contains("bound")) throw ConfigError("policy file needs a \"bound\"");
  const double bound = j.at("bound").get<double>();
  auto rates = std::make_shared<lclab::Payoff>(parse_payoff(j));
  return lclab::IntensityPolicy::from_markov(
      bound, [rates](double, long long x) { return rates->at(x); });
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open CSV output: " + path);
  out << header << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

std::vector<double> default_identity_grid() { return {0.5, 1.0, 2.0, 4.0}; }

struct Common {
  std::string report_path = "lclab-report.json";
  int threads = 0;
  double tolerance = std::numeric_limits<double>::quiet_NaN();  // per-command default
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--report", common.report_path, "JSON report output path");
  cmd->add_option("--threads", common.threads, "worker thread override");
  cmd->add_option("--tolerance", common.tolerance, "main tolerance override");
}

double effective_tolerance(const Common& common, double dflt) {
  if (std::isnan(common.tolerance)) return dflt;
  if (!(common.tolerance > 0.0)) throw ConfigError("tolerances must be positive");
  return common.tolerance;
}

// ---------------------------------------------------------------------------

Outcome run_check_logconcave(const std::string& measure_arg,
                             const std::string& sequence_path, double t, int n_max,
                             double tol, ordered_json& results) {
  Outcome outcome;
  if (!sequence_path.empty()) {
    const json j = load_json_file(sequence_path);
    if (!j.is_array()) throw ConfigError("sequence file must be a JSON array");
    lclab::LogConcaveSeq seq(j.get<std::vector<double>>());
    const auto report = lclab::is_log_concave(seq, tol);
    results["sequence"] = {{"pass", report.pass},
                           {"violation_index", report.violation_index},
                           {"margin", json_number(report.margin)},
                           {"reason", report.reason}};
    outcome.require(report.pass, "sequence certification failed: " + report.reason);
    return outcome;
  }
  const auto mu = resolve_measure_cfg(measure_arg);
  const auto measure_report = lclab::certify_log_concave_measure(mu);
  results["measure"] = {{"pass", measure_report.pass},
                        {"kind", measure_report.kind},
                        {"reason", measure_report.reason}};
  lclab::MeasureMomentSource src(mu);
  auto seq = lclab::taylor_coeffs(src, t, n_max);
  const auto seq_report = seq.certify(tol);
  results["taylor"] = {{"t", t},
                       {"n_max", n_max},
                       {"pass", seq_report.pass},
                       {"violation_index", seq_report.violation_index},
                       {"margin", json_number(seq_report.margin)}};
  outcome.require(measure_report.pass,
                  "measure certification failed: " + measure_report.reason);
  outcome.require(seq_report.pass,
                  "Taylor coefficient sequence failed at index " +
                      std::to_string(seq_report.violation_index));
  return outcome;
}

Outcome run_taylor(const std::string& measure_arg, double t, int n_max,
                   const std::string& csv_path, ordered_json& results) {
  Outcome outcome;
  const auto mu = resolve_measure_cfg(measure_arg);
  lclab::MeasureMomentSource src(mu);
  const auto table = lclab::build_moment_table(src, t, n_max);
  results["t"] = t;
  results["values"] = table.values;
  for (double v : table.values)
    outcome.require(std::isfinite(v), "non-finite moment in the table");
  if (!csv_path.empty()) {
    std::vector<std::vector<double>> rows;
    for (size_t n = 0; n < table.values.size(); ++n)
      rows.push_back({static_cast<double>(n), table.values[n]});
    write_csv(csv_path, "n,a_t_n", rows);
  }
  return outcome;
}

Outcome run_bb_transform(const std::string& measure_arg, const std::string& quad,
                         const std::string& out_path, const std::string& plot_path,
                         double tol, ordered_json& results) {
  Outcome outcome;
  const auto mu = resolve_measure_cfg(measure_arg);
  const auto q = parse_quad(quad);
  lclab::BBTransform bb;
  try {
    bb = lclab::bb_transform(mu, q);
  } catch (const lclab::NonNegativityError& e) {
    results["certified_nonnegative"] = false;
    results["most_negative"] = json_number(e.most_negative());
    outcome.require(false, e.what());
    return outcome;
  }
  results["certified_nonnegative"] = true;
  results["min_sampled_density"] = json_number(bb.min_sampled);
  results["nu_log_concave_observed"] = *bb.nu_log_concave;
  results["nu_total_variation"] = json_number(lclab::total_variation(bb.nu));

  const auto grid = default_identity_grid();
  const auto identity = lclab::verify_laplace_identity(bb, grid, tol);
  results["laplace_identity"] = {{"pass", identity.pass},
                                 {"max_rel_err", json_number(identity.max_rel_err)},
                                 {"worst_t", identity.worst_t},
                                 {"grid", grid}};
  outcome.require(identity.pass, "Laplace identity exceeded tolerance");

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot open output: " + out_path);
    out << lclab::measure_to_json_text(bb.nu) << "\n";
  }
  if (!plot_path.empty()) {
    std::vector<std::vector<double>> rows;
    double lo = 0.0, hi = 1.0;
    if (!bb.nu.pieces().empty()) {
      lo = bb.nu.pieces().front().lo;
      const auto& last = bb.nu.pieces().back();
      hi = last.unbounded() ? last.lo + 20.0 / last.rate : last.hi;
    }
    for (int i = 0; i <= 256; ++i) {
      const double x = lo + (hi - lo) * i / 256.0;
      rows.push_back({x, bb.nu.density_at(x)});
    }
    write_csv(plot_path, "x,density", rows);
  }
  return outcome;
}

Outcome run_cm_certify(const std::string& measure_arg, const std::string& gamma_arg,
                       const std::string& quads_arg, int n_max, double t_lo,
                       double t_hi, int t_points, int j_max, double tol,
                       const std::string& curve_csv, ordered_json& results) {
  Outcome outcome;
  std::unique_ptr<lclab::MomentSource> src;
  if (!gamma_arg.empty()) {
    size_t comma = gamma_arg.find(',');
    if (comma == std::string::npos)
      throw ConfigError("--gamma expects 'p,beta'");
    try {
      src = std::make_unique<lclab::GammaMomentSource>(
          lclab::GammaMomentSource::normalized(std::stod(gamma_arg.substr(0, comma)),
                                               std::stod(gamma_arg.substr(comma + 1))));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else {
    src = std::make_unique<lclab::MeasureMomentSource>(resolve_measure_cfg(measure_arg));
  }

  std::vector<lclab::Quadruple> quads;
  if (!quads_arg.empty()) {
    size_t pos = 0;
    while (pos < quads_arg.size()) {
      size_t semi = quads_arg.find(';', pos);
      quads.push_back(parse_quad(quads_arg.substr(
          pos, semi == std::string::npos ? std::string::npos : semi - pos)));
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
  } else {
    quads = lclab::enumerate_quadruples(n_max);
  }

  const auto grid = lclab::geometric_grid(t_lo, t_hi, t_points);
  results["t_grid"] = {{"lo", t_lo}, {"hi", t_hi}, {"points", t_points}};
  results["j_max"] = j_max;
  results["quadruples"] = ordered_json::array();
  for (const auto& q : quads) {
    const auto report = lclab::complete_monotonicity_certificate(*src, q, grid, j_max, tol);
    results["quadruples"].push_back(
        {{"q", lclab::to_string(q)},
         {"pass", report.pass},
         {"min_rel_value", json_number(report.min_rel_value)},
         {"worst_j", report.worst_j}});
    outcome.require(report.pass, "complete monotonicity failed for " + lclab::to_string(q));
  }
  if (!curve_csv.empty()) {
    std::vector<lclab::MeasurementFn> curves;
    curves.reserve(quads.size());
    for (const auto& q : quads) curves.emplace_back(*src, q);
    std::vector<std::vector<double>> rows;
    for (double t : grid) {
      std::vector<double> row{t};
      for (const auto& curve : curves) row.push_back(curve(t));
      rows.push_back(std::move(row));
    }
    std::string header = "t";
    for (const auto& q : quads) header += ",c" + lclab::to_string(q);
    write_csv(curve_csv, header, rows);
  }
  return outcome;
}

Outcome run_post_invert(const std::string& measure_arg,
                        const std::vector<double>& ts, const std::vector<double>& rs,
                        const std::string& gt_csv, ordered_json& results) {
  Outcome outcome;
  const auto mu = resolve_measure_cfg(measure_arg);
  lclab::MeasureMomentSource src(mu);
  results["cases"] = ordered_json::array();
  for (double t : ts)
    for (double R : rs) {
      const double sum = lclab::post_inversion_sum(src, t, R);
      const double gt_mass = lclab::gt_interval_mass(src, t, R);
      const double bound = 3.0 * lclab::sup_scaled_moment(src, t);
      const double target = mu.interval_mass(0.0, R, true);
      const bool em_ok = std::abs(gt_mass - sum) <= bound;
      results["cases"].push_back({{"t", t},
                                  {"R", R},
                                  {"post_sum", json_number(sum)},
                                  {"gt_mass", json_number(gt_mass)},
                                  {"em_bound", json_number(bound)},
                                  {"em_pass", em_ok},
                                  {"interval_mass", json_number(target)},
                                  {"gap", json_number(std::abs(sum - target))}});
      outcome.require(em_ok, "Riemann-sum bound violated at t = " + format_double(t));
    }
  if (!gt_csv.empty()) {
    const double t = ts.front();
    lclab::GtDensity g(src, t);
    const double hi = *std::max_element(rs.begin(), rs.end());
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= 512; ++i) {
      const double x = hi * i / 512.0;
      rows.push_back({x, g(x)});
    }
    write_csv(gt_csv, "x,g_t", rows);
  }
  return outcome;
}

Outcome run_root_convexity(const std::string& measure_arg, int n, double t_lo,
                           double t_hi, int t_points, double tol,
                           ordered_json& results) {
  Outcome outcome;
  const auto mu = resolve_measure_cfg(measure_arg);
  lclab::MeasureMomentSource src(mu);
  const auto grid = lclab::geometric_grid(t_lo, t_hi, t_points);
  const auto report = lclab::root_convexity_check(src, n, grid, tol);
  results["n"] = n;
  results["pass"] = report.pass;
  results["min_slack"] = json_number(report.min_slack);
  outcome.require(report.pass, "convexity violated on the grid");
  return outcome;
}

Outcome run_poisson_variational(const std::string& payoff_path, double horizon,
                                std::int64_t trajectories, std::uint64_t seed,
                                const std::string& policy_spec,
                                ordered_json& results) {
  Outcome outcome;
  const auto payoff = parse_payoff(load_json_file(payoff_path));
  const auto policy = parse_policy(policy_spec, payoff, horizon);
  const double lhs = lclab::log_poisson_integral(payoff, horizon);
  const auto mc = lclab::mc_functional(policy, payoff, horizon, trajectories, seed);
  const bool optimal = policy_spec == "optimal";
  const double slack = 3.0 * mc.se;
  const bool ok = optimal ? std::abs(mc.estimate - lhs) <= slack
                          : mc.estimate <= lhs + slack;
  results["lhs"] = json_number(lhs);
  results["estimate"] = json_number(mc.estimate);
  results["se"] = json_number(mc.se);
  results["trajectories"] = mc.n_traj;
  results["verdict"] = ok ? (optimal ? "equality within 3 se" : "bounded by lhs + 3 se")
                          : "violated";
  if (policy.markov) {
    const int x_max = lclab::suggest_x_max(policy.bound, horizon);
    results["ode_value"] = json_number(
        lclab::ode_policy_value(policy, payoff, horizon, x_max));
  }
  outcome.require(ok, "variational verdict: violated");
  return outcome;
}

Outcome run_coupling_check(const std::string& alpha_spec, const std::string& beta_spec,
                           double horizon, int noises, std::uint64_t seed, double tol,
                           ordered_json& results) {
  Outcome outcome;
  const auto alpha = parse_policy(alpha_spec, std::nullopt, horizon);
  const auto beta = parse_policy(beta_spec, std::nullopt, horizon);
  const double cap = std::max(alpha.bound, beta.bound);
  long long mismatches = 0;
  double max_defect = 0.0;
  long long atoms = 0;
  for (int i = 0; i < noises; ++i) {
    const auto noise = lclab::PlanarNoise::sample(horizon, cap, seed,
                                                  static_cast<std::uint64_t>(i));
    const auto report = lclab::coupling_check(alpha, beta, noise);
    mismatches += report.mismatches;
    max_defect = std::max(max_defect, report.max_rate_swap_defect);
    atoms += report.atoms_processed;
  }
  results["noises"] = noises;
  results["atoms_processed"] = atoms;
  results["mismatches"] = mismatches;
  results["max_rate_swap_defect"] = json_number(max_defect);
  outcome.require(mismatches == 0, "floor/ceil coupling mismatch");
  outcome.require(max_defect <= tol, "rate swap identity violated");
  return outcome;
}

Outcome run_discrete_pl(const std::string& quad_path, const std::string& mode,
                        double T, const std::vector<long long>& limits, double tol,
                        ordered_json& results) {
  Outcome outcome;
  const json j = load_json_file(quad_path);
  lclab::FourFunctions q;
  try {
    q.f = parse_intfn(j.at("f"));
    q.g = parse_intfn(j.at("g"));
    q.h = parse_intfn(j.at("h"));
    q.k = parse_intfn(j.at("k"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("quad file needs f, g, h, k maps: ") + e.what());
  }
  const auto hypothesis = lclab::check_hypothesis(q);
  results["hypothesis"] = {{"pass", hypothesis.pass}};
  if (!hypothesis.pass) {
    results["hypothesis"]["x"] = hypothesis.x;
    results["hypothesis"]["y"] = hypothesis.y;
    outcome.require(false, "hypothesis fails at (" + std::to_string(hypothesis.x) +
                               ", " + std::to_string(hypothesis.y) + ")");
    return outcome;
  }
  const auto conclusion = mode == "poisson"
                              ? lclab::check_conclusion_poisson(q, T, tol)
                              : lclab::check_conclusion_counting(q, tol);
  results["mode"] = mode;
  if (mode == "poisson") results["T"] = T;
  results["conclusion"] = {{"lhs", json_number(conclusion.lhs)},
                           {"rhs", json_number(conclusion.rhs)},
                           {"pass", conclusion.pass}};
  outcome.require(conclusion.pass, "conclusion inequality violated");
  if (!limits.empty()) {
    const auto rows = lclab::stirling_limit_experiment(q, limits);
    results["limit"] = ordered_json::array();
    for (const auto& row : rows) {
      results["limit"].push_back({{"n", row.n},
                                  {"s_f", json_number(row.s_f)},
                                  {"target_f", json_number(row.target_f)},
                                  {"shifted_pass", row.shifted_inequality_pass}});
      outcome.require(row.shifted_inequality_pass,
                      "shifted inequality fails at n = " + std::to_string(row.n));
    }
  }
  return outcome;
}

Outcome run_figure1(const std::string& csv_path, double tol, ordered_json& results) {
  Outcome outcome;
  const auto mu = lclab::HalfLineMeasure::uniform(1.0, 2.0);
  const auto bb = lclab::bb_transform(mu, lclab::Quadruple(0, 1, 1, 2));
  auto closed_form = [](double s) {
    if (s < 2.0 || s > 4.0) return 0.0;
    return s <= 3.0 ? (s - 1.0) * (s - 2.0) / 2.0 : (s - 2.0) * (4.0 - s);
  };
  double max_err = 0.0;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= 100; ++i) {
    const double s = 2.0 + 2.0 * i / 100.0;
    const double v = bb.nu.density_at(s);
    max_err = std::max(max_err, std::abs(v - closed_form(s)));
    rows.push_back({s, v});
  }
  const double at3 = bb.nu.density_at(3.0);
  const bool exact = lclab::figure1_exact_check();
  results["max_abs_err"] = json_number(max_err);
  results["density_at_3"] = json_number(at3);
  results["rational_path_exact"] = exact;
  outcome.require(max_err <= tol, "double-path density deviates by " + format_double(max_err));
  outcome.require(std::abs(at3 - 1.0) <= 1e-12, "density(3.0) != 1");
  outcome.require(exact, "rational-arithmetic path mismatch");
  if (!csv_path.empty()) write_csv(csv_path, "s,density", rows);
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-concavity laboratory"};
  app.require_subcommand(1);

  Common common;

  // check-logconcave
  auto* sc_check = app.add_subcommand("check-logconcave",
                                      "certify a measure or a sequence");
  std::string check_measure, check_sequence;
  double check_t = 1.0;
  int check_n = 50;
  sc_check->add_option("--measure", check_measure, "named measure or JSON file");
  sc_check->add_option("--sequence", check_sequence, "JSON array file");
  sc_check->add_option("--t", check_t, "transform parameter");
  sc_check->add_option("--N", check_n, "number of coefficients");
  add_common(sc_check, common);

  // taylor
  auto* sc_taylor = app.add_subcommand("taylor", "dump the coefficient table");
  std::string taylor_measure, taylor_csv;
  double taylor_t = 1.0;
  int taylor_n = 50;
  sc_taylor->add_option("--measure", taylor_measure)->required();
  sc_taylor->add_option("--t", taylor_t);
  sc_taylor->add_option("--N", taylor_n);
  sc_taylor->add_option("--csv", taylor_csv, "CSV output path");
  add_common(sc_taylor, common);

  // bb-transform
  auto* sc_bb = app.add_subcommand("bb-transform", "construct and certify a transform");
  std::string bb_measure, bb_quad, bb_out, bb_plot;
  sc_bb->add_option("--measure", bb_measure)->required();
  sc_bb->add_option("--quad", bb_quad, "k,l,m,n")->required();
  sc_bb->add_option("--out", bb_out, "measure JSON output");
  sc_bb->add_option("--plot", bb_plot, "density CSV output");
  add_common(sc_bb, common);

  // cm-certify
  auto* sc_cm = app.add_subcommand("cm-certify", "complete monotonicity certificates");
  std::string cm_measure, cm_gamma, cm_quads, cm_csv;
  int cm_nmax = 4, cm_points = 17, cm_jmax = 4;
  double cm_tlo = 0.25, cm_thi = 8.0;
  sc_cm->add_option("--measure", cm_measure);
  sc_cm->add_option("--gamma", cm_gamma, "closed-form source 'p,beta'");
  sc_cm->add_option("--quads", cm_quads, "semicolon-separated k,l,m,n list");
  sc_cm->add_option("--nmax", cm_nmax, "enumerate all quadruples with n <= nmax");
  sc_cm->add_option("--tmin", cm_tlo);
  sc_cm->add_option("--tmax", cm_thi);
  sc_cm->add_option("--tpoints", cm_points);
  sc_cm->add_option("--jmax", cm_jmax);
  sc_cm->add_option("--curve-csv", cm_csv, "emit (t, c_q(t)) curves");
  add_common(sc_cm, common);

  // post-invert
  auto* sc_post = app.add_subcommand("post-invert", "partial-sum inversion experiment");
  std::string post_measure, post_gt_csv;
  std::vector<double> post_ts{400.0}, post_rs{1.5};
  sc_post->add_option("--measure", post_measure)->required();
  sc_post->add_option("--t", post_ts, "inversion parameters");
  sc_post->add_option("--R", post_rs, "interval endpoints");
  sc_post->add_option("--gt-csv", post_gt_csv, "emit (x, g_t(x)) samples");
  add_common(sc_post, common);

  // root-convexity
  auto* sc_root = app.add_subcommand("root-convexity", "convexity of the derivative root");
  std::string root_measure;
  int root_n = 2, root_points = 33;
  double root_tlo = 0.1, root_thi = 5.0;
  sc_root->add_option("--measure", root_measure)->required();
  sc_root->add_option("--n", root_n)->required();
  sc_root->add_option("--tmin", root_tlo);
  sc_root->add_option("--tmax", root_thi);
  sc_root->add_option("--tpoints", root_points);
  add_common(sc_root, common);

  // poisson-variational
  auto* sc_pv = app.add_subcommand("poisson-variational", "variational formula driver");
  std::string pv_payoff, pv_policy = "optimal";
  double pv_T = 1.0;
  std::int64_t pv_traj = 10000;
  std::uint64_t pv_seed = 0;
  bool pv_seed_set = false;
  sc_pv->add_option("--payoff", pv_payoff)->required();
  sc_pv->add_option("--horizon", pv_T);
  sc_pv->add_option("--trajectories", pv_traj);
  sc_pv->add_option("--seed", pv_seed)->each([&](const std::string&) { pv_seed_set = true; });
  sc_pv->add_option("--policy", pv_policy, "optimal | constant:<c> | file");
  add_common(sc_pv, common);

  // coupling-check
  auto* sc_cc = app.add_subcommand("coupling-check", "floor/ceil midpoint coupling");
  std::string cc_alpha = "constant:2", cc_beta = "constant:1";
  double cc_T = 1.0;
  int cc_noises = 1000;
  std::uint64_t cc_seed = 0;
  bool cc_seed_set = false;
  sc_cc->add_option("--alpha", cc_alpha);
  sc_cc->add_option("--beta", cc_beta);
  sc_cc->add_option("--horizon", cc_T);
  sc_cc->add_option("--noises", cc_noises);
  sc_cc->add_option("--seed", cc_seed)->each([&](const std::string&) { cc_seed_set = true; });
  add_common(sc_cc, common);

  // discrete-pl
  auto* sc_pl = app.add_subcommand("discrete-pl", "four-function inequality checks");
  std::string pl_quad, pl_mode = "counting";
  double pl_T = 1.0;
  std::vector<long long> pl_limits;
  sc_pl->add_option("--quad", pl_quad)->required();
  sc_pl->add_option("--mode", pl_mode)->check(CLI::IsMember({"counting", "poisson"}));
  sc_pl->add_option("--T", pl_T);
  sc_pl->add_option("--limit", pl_limits)->delimiter(',');
  add_common(sc_pl, common);

  // figure1
  auto* sc_fig = app.add_subcommand("figure1", "golden transform reproduction");
  std::string fig_csv = "figure1.csv";
  sc_fig->add_option("--out", fig_csv, "CSV output path");
  add_common(sc_fig, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ordered_json report;
  report["schema"] = 1;
  ordered_json results;
  Outcome outcome;
  std::string command;

  try {
    if (common.threads > 0) lclab::set_thread_count(common.threads);

    if (sc_check->parsed()) {
      command = "check-logconcave";
      if (check_measure.empty() == check_sequence.empty())
        throw ConfigError("provide exactly one of --measure or --sequence");
      const double tol = effective_tolerance(common, lclab::kSeqRelTol);
      report["config"] = {{"measure", check_measure}, {"sequence", check_sequence},
                          {"t", check_t}, {"N", check_n}};
      report["tolerances"] = {{"rel_tol", tol}};
      outcome = run_check_logconcave(check_measure, check_sequence, check_t,
                                     check_n, tol, results);
    } else if (sc_taylor->parsed()) {
      command = "taylor";
      report["config"] = {{"measure", taylor_measure}, {"t", taylor_t}, {"N", taylor_n}};
      report["tolerances"] = ordered_json::object();
      outcome = run_taylor(taylor_measure, taylor_t, taylor_n, taylor_csv, results);
    } else if (sc_bb->parsed()) {
      command = "bb-transform";
      const double tol = effective_tolerance(common, 1e-9);
      report["config"] = {{"measure", bb_measure}, {"quad", bb_quad},
                          {"out", bb_out}, {"plot", bb_plot}};
      report["tolerances"] = {{"identity_rel_tol", tol}};
      outcome = run_bb_transform(bb_measure, bb_quad, bb_out, bb_plot, tol, results);
    } else if (sc_cm->parsed()) {
      command = "cm-certify";
      if (cm_measure.empty() == cm_gamma.empty())
        throw ConfigError("provide exactly one of --measure or --gamma");
      const double tol = effective_tolerance(common, 1e-12);
      report["config"] = {{"measure", cm_measure}, {"gamma", cm_gamma},
                          {"quads", cm_quads}, {"nmax", cm_nmax}, {"jmax", cm_jmax}};
      report["tolerances"] = {{"rel_tol", tol}};
      outcome = run_cm_certify(cm_measure, cm_gamma, cm_quads, cm_nmax, cm_tlo,
                               cm_thi, cm_points, cm_jmax, tol, cm_csv, results);
    } else if (sc_post->parsed()) {
      command = "post-invert";
      report["config"] = {{"measure", post_measure}, {"t", post_ts}, {"R", post_rs}};
      report["tolerances"] = ordered_json::object();
      outcome = run_post_invert(post_measure, post_ts, post_rs, post_gt_csv, results);
    } else if (sc_root->parsed()) {
      command = "root-convexity";
      const double tol = effective_tolerance(common, 1e-9);
      report["config"] = {{"measure", root_measure}, {"n", root_n},
                          {"tmin", root_tlo}, {"tmax", root_thi}, {"tpoints", root_points}};
      report["tolerances"] = {{"second_difference_tol_factor", tol}};
      outcome = run_root_convexity(root_measure, root_n, root_tlo, root_thi,
                                   root_points, tol, results);
    } else if (sc_pv->parsed()) {
      command = "poisson-variational";
      if (!pv_seed_set) throw ConfigError("--seed is mandatory for stochastic runs");
      if (pv_traj <= 0) throw ConfigError("--trajectories must be positive");
      report["config"] = {{"payoff", pv_payoff}, {"horizon", pv_T},
                          {"trajectories", pv_traj}, {"seed", pv_seed},
                          {"policy", pv_policy}};
      report["tolerances"] = {{"sigma_multiple", 3.0}};
      outcome = run_poisson_variational(pv_payoff, pv_T, pv_traj, pv_seed,
                                        pv_policy, results);
    } else if (sc_cc->parsed()) {
      command = "coupling-check";
      if (!cc_seed_set) throw ConfigError("--seed is mandatory for stochastic runs");
      const double tol = effective_tolerance(common, 1e-12);
      report["config"] = {{"alpha", cc_alpha}, {"beta", cc_beta}, {"horizon", cc_T},
                          {"noises", cc_noises}, {"seed", cc_seed}};
      report["tolerances"] = {{"rate_swap_tol", tol}};
      outcome = run_coupling_check(cc_alpha, cc_beta, cc_T, cc_noises, cc_seed, tol, results);
    } else if (sc_pl->parsed()) {
      command = "discrete-pl";
      const double tol = effective_tolerance(common, 1e-12);
      report["config"] = {{"quad", pl_quad}, {"mode", pl_mode}, {"T", pl_T},
                          {"limit", pl_limits}};
      report["tolerances"] = {{"rel_tol", tol}};
      outcome = run_discrete_pl(pl_quad, pl_mode, pl_T, pl_limits, tol, results);
    } else if (sc_fig->parsed()) {
      command = "figure1";
      const double tol = effective_tolerance(common, 1e-8);
      report["config"] = {{"out", fig_csv}};
      report["tolerances"] = {{"max_abs_err", tol}};
      outcome = run_figure1(fig_csv, tol, results);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    report["command"] = command;
    report["error"] = e.what();
    std::ofstream out(common.report_path);
    out << report.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    outcome.require(false, e.what());
  }

  report["command"] = command;
  report["results"] = results;
  report["pass"] = outcome.pass;
  if (!outcome.pass) report["failure"] = outcome.failure;

  std::ofstream out(common.report_path);
  if (!out) {
    std::cerr << "error: cannot write report to " << common.report_path << "\n";
    return 2;
  }
  out << report.dump(2) << "\n";

  if (outcome.pass) {
    std::cout << command << ": pass\n";
    return 0;
  }
  std::cout << command << ": FAIL (" << outcome.failure << ")\n";
  return 1;
}
