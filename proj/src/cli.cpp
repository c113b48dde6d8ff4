#include "sgmeta/cli.hpp"

#include "sgmeta/errors.hpp"
#include "sgmeta/ldp_path.hpp"
#include "sgmeta/prefactor.hpp"
#include "sgmeta/spectrum.hpp"
#include "sgmeta/stationary.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#ifndef SGMETA_VERSION
#define SGMETA_VERSION "unknown"
#endif

namespace sgmeta::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
constexpr double pi = std::numbers::pi;

/// Shortest round-trip decimal form.
std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

struct Settings {
  ModelParams p{.gamma = 0.1, .beta = 5.0, .epsilon = 0.1, .N = 16, .confining_k = 1};
  SimConfig c;
  std::optional<int> N;
  std::optional<double> delta;
  std::string scheme = "semi-implicit";
  std::string zero_mode = "coefficient";
  std::string out = ".";
  std::optional<std::string> timestamp;

  int trials = 100;
  std::optional<double> trajectory_time;
  int snapshot_every = 100;

  double total_time = 200.0;
  std::optional<int> max_jumps;

  int images = 64;
  int max_iterations = 10000;
  double tolerance = 1e-8;

  double beta_min = 0.1;
  double beta_max = 10.0;
  int steps = 99;

  double gamma_beta = 2.0;
  double phase_beta = 1.0;
  int inner_levels = 8;
  int outer_levels = 4;
  int samples = 201;

  int realizations = 20;
  double T = 0.2;
  double alpha = 0.0;
  std::vector<int> N_list{16, 32, 64, 128};
  int N_reference = 256;

  std::string manifest_path;
};

Scheme parse_scheme(const std::string& s) {
  for (Scheme v : {Scheme::semi_implicit, Scheme::exponential})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

ZeroModeMetric parse_zero_mode(const std::string& s) {
  for (ZeroModeMetric v : {ZeroModeMetric::coefficient, ZeroModeMetric::white_noise})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown zero-mode metric '" + s + "'");
}

json params_json(const ModelParams& p) {
  return {{"gamma", p.gamma},
          {"beta", p.beta},
          {"epsilon", p.epsilon},
          {"N", p.N},
          {"confining_k", p.confining_k}};
}

json config_json(const SimConfig& c, const ModelParams& p) {
  return {{"dt", c.dt},
          {"scheme", to_string(c.scheme)},
          {"seed", c.seed},
          {"max_time", c.max_time},
          {"check_every", c.check_every},
          {"kappa", c.kappa},
          {"delta", c.delta_for(p)},
          {"c0", c.c0},
          {"zero_mode", to_string(c.zero_mode)}};
}

json estimate_json(const TransitionTimeEstimate& e, double eps) {
  return {{"method", to_string(e.method)},
          {"prefactor", e.prefactor},
          {"barrier", e.barrier},
          {"N_used", e.N_used ? json(*e.N_used) : json(nullptr)},
          {"expected_time", e.expected_time(eps)},
          {"expected_time_one_sided", e.expected_time_one_sided(eps)}};
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json determinant_json(const DeterminantReport& d, const std::string& method) {
  return {{"method", method},
          {"value", d.value()},
          {"log_ratio", d.log_ratio},
          {"sign", d.sign},
          {"zero_removed", d.zero_removed},
          {"m", opt_json(d.m)},
          {"N_used", opt_json(d.N_used)},
          {"y1_norm_sq", opt_json(d.y1_norm_sq)},
          {"y1_at_quarter", opt_json(d.y1_at_quarter)},
          {"y2_at_quarter", opt_json(d.y2_at_quarter)},
          {"y2_prime_at_quarter", opt_json(d.y2_prime_at_quarter)}};
}

json spectrum_json(const SpectrumReport& s, int N, const std::string& at) {
  std::vector<double> lowest;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(8, s.eigenvalues.size()); ++i) lowest.push_back(s.eigenvalues[i]);
  return {{"at", at},
          {"N", N},
          {"neg_count", s.neg_count()},
          {"zero_count", s.zero_count()},
          {"mu", opt_json(s.mu)},
          {"zero_vector_overlap", opt_json(s.zero_vector_overlap)},
          {"zero_threshold", s.zero_threshold},
          {"max_relative_residual", s.max_relative_residual},
          {"lowest_eigenvalues", lowest}};
}

json coeffs_json(const FourierField& u) { return std::vector<double>(u.coeffs().begin(), u.coeffs().end()); }

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + (dir / name).string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

using Outputs = std::vector<std::string>;

Outputs cmd_prefactor(const ModelParams& p, const fs::path& dir, std::ostream& out) {
  const double gb = p.gamma_beta();
  json r;
  r["schema_version"] = "sgmeta.prefactor/1";
  r["regime"] = to_string(regime_of(p));
  r["params"] = params_json(p);
  if (regime_of(p) == Regime::sub) {
    const auto pre = prefactor_sub(p);
    r["estimates"] = json::array({estimate_json(pre.finite_n, p.epsilon), estimate_json(pre.closed_form, p.epsilon)});
    r["determinant"] = {{"method", "gelfand-yaglom"},
                        {"value", gelfand_yaglom_ratio(gb)},
                        {"closed_form", gelfand_yaglom_closed_form(gb)}};
    ModelParams q = p;
    q.N = std::min(p.N, 256);
    r["spectrum"] = spectrum_json(spectrum_at(FourierField::constant(q.N, pi / p.beta), q), q.N, "constant-saddle");
  } else {
    const auto saddle = elliptic_saddle(p, 1);
    const auto spec = spectrum_at(saddle.field, p);
    const auto sp = prefactor_super(p, saddle, spec);
    r["estimates"] = json::array({estimate_json(sp.estimate, p.epsilon)});
    r["super"] = {{"mu", sp.mu},
                  {"manifold_length", sp.manifold_length},
                  {"barrier", sp.estimate.barrier},
                  {"constant_saddle_barrier", sp.constant_saddle_barrier},
                  {"log_determinant_ratio", sp.log_determinant_ratio},
                  {"potential_mean", sp.potential_mean},
                  {"tail_corrected_prefactor", sp.tail_corrected_prefactor},
                  {"tail_corrected_expected_time",
                   sp.tail_corrected_prefactor * std::exp(sp.estimate.barrier / p.epsilon)},
                  {"saddle",
                   {{"energy", saddle.energy},
                    {"modulus", opt_json(saddle.modulus)},
                    {"harmonic", opt_json(saddle.harmonic)},
                    {"residual", saddle.residual}}}};
    r["determinant"] = determinant_json(mckane_tarlie(p), "mckane-tarlie");
    r["finite_n_determinant"] = determinant_json(finite_n_determinant_ratio(spec, gb), "finite-N spectrum");
    r["spectrum"] = spectrum_json(spec, p.N, "elliptic-saddle");
  }
  const std::string text = dump(r);
  write_file(dir, "prefactor.json", text);
  out << text;
  return {"prefactor.json"};
}

Outputs cmd_bifurcation(const Settings& s, int N, const fs::path& dir) {
  if (s.steps < 1 || !(s.beta_min > 0.0) || !(s.beta_max > s.beta_min))
    throw std::invalid_argument("bifurcation: need 0 < beta-min < beta-max and steps >= 1");
  std::ostringstream csv;
  csv << "gamma_beta,branch,F_beta\n";
  for (int i = 0; i <= s.steps; ++i) {
    ModelParams q = s.p;
    q.N = N;
    q.beta = s.beta_min + (s.beta_max - s.beta_min) * i / s.steps;
    const double gb = q.gamma_beta();
    const double root = std::sqrt(gb);
    if (std::abs(root - std::round(root)) < 1e-9) continue;
    q.validate();
    const auto row = [&](const std::string& branch, double F) {
      csv << num(gb) << ',' << branch << ',' << num(F * q.beta) << '\n';
    };
    row("minimum", potential(FourierField::constant(N, 0.0), q));
    row("constant-saddle", potential(FourierField::constant(N, pi / q.beta), q));
    for (int j = 1; j < root; ++j) row("elliptic-" + std::to_string(j), elliptic_saddle(q, j).energy);
  }
  write_file(dir, "bifurcation.csv", csv.str());
  return {"bifurcation.csv"};
}

Outputs cmd_simulate(const Settings& s, const ModelParams& p, const SimConfig& c, const fs::path& dir) {
  if (s.trials < 1) throw std::invalid_argument("trials must be positive");
  p.require_regime();
  const auto res = mc_transition_time(p, c, s.trials);

  json reference = nullptr;
  try {
    if (regime_of(p) == Regime::sub) {
      reference = estimate_json(prefactor_sub(p).closed_form, p.epsilon);
    } else {
      reference = estimate_json(prefactor_super(p).estimate, p.epsilon);
    }
  } catch (const std::exception&) {
    reference = nullptr;
  }

  json records = json::array();
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    records.push_back({{"trial", i},
                       {"seed", r.trial_seed},
                       {"hit_time", r.hit_time},
                       {"exit_side", to_string(r.exit_side)},
                       {"steps", r.steps},
                       {"censored", r.censored}});
  }
  json j;
  j["schema_version"] = "sgmeta.simulate/1";
  j["params"] = params_json(p);
  j["config"] = config_json(c, p);
  j["summary"] = {{"trials", s.trials},         {"mean", res.mean},   {"std_error", res.std_error},
                  {"completed", res.completed}, {"censored", res.censored}, {"plus", res.plus},
                  {"minus", res.minus}};
  j["reference"] = reference;
  j["records"] = records;
  write_file(dir, "simulate.json", dump(j));
  Outputs outs{"simulate.json"};

  if (s.trajectory_time) {
    if (s.snapshot_every < 1) throw std::invalid_argument("snapshot-every must be positive");
    const auto snaps = simulate_trajectory(FourierField(p.N), p, c, *s.trajectory_time, s.snapshot_every,
                                           derive_seed(c.seed, 0));
    std::ostringstream csv;
    write_trajectory_csv(csv, snaps);
    write_file(dir, "trajectory.csv", csv.str());
    outs.push_back("trajectory.csv");
  }
  return outs;
}

Outputs cmd_randomwalk(const Settings& s, const ModelParams& p, const SimConfig& c, const fs::path& dir) {
  p.require_regime();
  const auto res = random_walk_experiment(p, c, s.total_time, s.max_jumps);
  std::ostringstream csv;
  csv << "jump,time,sojourn,sign,well\n";
  int plus = 0;
  for (std::size_t i = 0; i < res.jump_times.size(); ++i) {
    csv << i + 1 << ',' << num(res.jump_times[i]) << ',' << num(res.sojourn_times[i]) << ',' << res.signs[i] << ','
        << res.wells[i] << '\n';
    if (res.signs[i] > 0) ++plus;
  }
  const int n = static_cast<int>(res.signs.size());
  json j;
  j["schema_version"] = "sgmeta.randomwalk/1";
  j["params"] = params_json(p);
  j["config"] = config_json(c, p);
  j["summary"] = {{"jumps", n},
                  {"plus", plus},
                  {"minus", n - plus},
                  {"binomial_p", n > 0 ? json(binomial_two_sided_p(plus, n)) : json(nullptr)},
                  {"sojourn_cv", n > 1 ? json(coefficient_of_variation(res.sojourn_times)) : json(nullptr)},
                  {"final_well", n > 0 ? res.wells.back() : 0},
                  {"total_time", res.total_time},
                  {"steps", res.steps}};
  write_file(dir, "randomwalk.csv", csv.str());
  write_file(dir, "randomwalk.json", dump(j));
  return {"randomwalk.csv", "randomwalk.json"};
}

Outputs cmd_string(const Settings& s, const ModelParams& p, const fs::path& dir) {
  p.require_regime();
  const auto a = FourierField::constant(p.N, 0.0);
  const auto b = FourierField::constant(p.N, 2.0 * pi / p.beta);
  std::ostringstream csv;
  csv << std::setprecision(17);
  StringOptions opt;
  opt.images = s.images;
  opt.max_iterations = s.max_iterations;
  opt.tolerance = s.tolerance;
  opt.diagnostics = &csv;
  const auto res = communication_height(a, b, p, opt);

  const auto saddles = enumerate_saddles(p);
  const auto& gate = saddles.front();
  const double Fa = potential(a, p);
  json j;
  j["schema_version"] = "sgmeta.string/1";
  j["params"] = params_json(p);
  j["images"] = s.images;
  j["height"] = res.height;
  j["max_energy"] = res.height + Fa;
  j["iterations"] = res.iterations;
  j["climb_start"] = res.climb_start;
  j["argmax_index"] = res.argmax_index;
  j["argmax_residual"] = res.argmax_residual;
  j["gate"] = {{"kind", to_string(gate.kind)},
               {"energy", gate.energy},
               {"height", gate.energy - Fa},
               {"distance_modulo_translation", distance_modulo_translation(res.argmax_image, gate.field)}};
  j["argmax_coefficients"] = coeffs_json(res.argmax_image);
  write_file(dir, "string.csv", csv.str());
  write_file(dir, "string.json", dump(j));
  return {"string.csv", "string.json"};
}

Outputs cmd_phase(const Settings& s, const fs::path& dir) {
  PhaseGrid g;
  g.beta = s.p.beta;
  g.inner_levels = s.inner_levels;
  g.outer_levels = s.outer_levels;
  g.samples_per_branch = s.samples;
  const auto orbits = phase_portrait_data(s.gamma_beta, g);
  std::ostringstream csv;
  csv << "orbit,type,level,u,du\n";
  for (const auto& o : orbits)
    for (std::size_t i = 0; i < o.u.size(); ++i)
      csv << o.id << ',' << o.type << ',' << num(o.level) << ',' << num(o.u[i]) << ',' << num(o.du[i]) << '\n';
  write_file(dir, "phase.csv", csv.str());
  return {"phase.csv"};
}

Outputs cmd_galerkin(const Settings& s, const ModelParams& p, const SimConfig& c, const fs::path& dir) {
  GalerkinOptions opt;
  opt.N_list = s.N_list;
  opt.N_reference = s.N_reference;
  opt.T = s.T;
  opt.realizations = s.realizations;
  opt.alpha = s.alpha;
  const auto res = galerkin_convergence_test(p, c, opt);
  std::ostringstream csv;
  csv << "N,mean_gap\n";
  for (std::size_t i = 0; i < res.N_list.size(); ++i) csv << res.N_list[i] << ',' << num(res.mean_gap[i]) << '\n';
  json j;
  j["schema_version"] = "sgmeta.galerkin/1";
  j["params"] = params_json(p);
  j["config"] = config_json(c, p);
  j["N_list"] = res.N_list;
  j["N_reference"] = s.N_reference;
  j["T"] = s.T;
  j["alpha"] = s.alpha;
  j["mean_gap"] = res.mean_gap;
  j["fitted_exponent"] = res.fitted_exponent;
  j["gaps"] = res.gaps;
  write_file(dir, "galerkin.csv", csv.str());
  write_file(dir, "galerkin.json", dump(j));
  return {"galerkin.csv", "galerkin.json"};
}

Outputs cmd_saddles(const ModelParams& p, const fs::path& dir) {
  p.require_regime();
  json list = json::array();
  for (const auto& sp : enumerate_saddles(p)) {
    list.push_back({{"kind", to_string(sp.kind)},
                    {"harmonic", opt_json(sp.harmonic)},
                    {"modulus", opt_json(sp.modulus)},
                    {"energy", sp.energy},
                    {"height", sp.energy - potential(FourierField::constant(p.N, 0.0), p)},
                    {"neg_count", sp.neg_count},
                    {"zero_count", sp.zero_count},
                    {"residual", sp.residual}});
  }
  json j;
  j["schema_version"] = "sgmeta.saddles/1";
  j["params"] = params_json(p);
  j["saddles"] = list;
  write_file(dir, "saddles.json", dump(j));
  return {"saddles.json"};
}

std::optional<std::string> timestamp_from_env() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  const long long secs = std::strtoll(env, &end, 10);
  if (*end != '\0' || secs < 0) throw std::invalid_argument("SOURCE_DATE_EPOCH must be a non-negative integer");
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

/// Arguments minus --out, which only selects where files go.
std::vector<std::string> reproducible_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

void add_model_options(CLI::App* sub, Settings& s, bool with_N = true) {
  sub->add_option("--gamma", s.p.gamma, "coupling γ")->capture_default_str();
  sub->add_option("--beta", s.p.beta, "inverse temperature-like parameter β")->capture_default_str();
  sub->add_option("--eps", s.p.epsilon, "noise strength ε")->capture_default_str();
  if (with_N) sub->add_option("--N", s.N, "Galerkin truncation");
  sub->add_option("--confining-k", s.p.confining_k, "wells kept before the confining term")->capture_default_str();
}

void add_sim_options(CLI::App* sub, Settings& s) {
  sub->add_option("--dt", s.c.dt, "time step")->capture_default_str();
  sub->add_option("--seed", s.c.seed, "master seed")->capture_default_str();
  sub->add_option("--max-time", s.c.max_time, "censoring time per trial")->capture_default_str();
  sub->add_option("--kappa", s.c.kappa, "Hölder exponent deficit κ")->capture_default_str();
  sub->add_option("--delta", s.delta, "radius δ of the well sets (default 0.2·2π/β)");
  sub->add_option("--c0", s.c.c0, "constant c₀ of the sub-regime set B")->capture_default_str();
  sub->add_option("--check-every", s.c.check_every, "steps between set membership tests")->capture_default_str();
  sub->add_option("--scheme", s.scheme, "semi-implicit or exponential")->capture_default_str();
  sub->add_option("--zero-mode", s.zero_mode, "coefficient or white-noise")->capture_default_str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Metastability lab for the stochastic sine-Gordon equation", "sgmeta"};
  app.set_version_flag("--version", code_version());
  app.require_subcommand(1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", s.out, "output directory")->capture_default_str();
    sub->add_option("--timestamp", s.timestamp, "timestamp recorded in the manifest");
  };

  auto* prefactor = app.add_subcommand("prefactor", "Eyring–Kramers prefactor, determinants and spectrum");
  add_model_options(prefactor, s);
  common(prefactor);

  auto* bifurcation = app.add_subcommand("bifurcation", "stationary energies F·β against γβ (β sweep)");
  add_model_options(bifurcation, s);
  bifurcation->add_option("--beta-min", s.beta_min)->capture_default_str();
  bifurcation->add_option("--beta-max", s.beta_max)->capture_default_str();
  bifurcation->add_option("--steps", s.steps, "number of sweep intervals")->capture_default_str();
  common(bifurcation);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo transition times");
  add_model_options(simulate, s);
  add_sim_options(simulate, s);
  simulate->add_option("--trials", s.trials)->capture_default_str();
  simulate->add_option("--trajectory", s.trajectory_time, "also write one trajectory up to this time");
  simulate->add_option("--snapshot-every", s.snapshot_every)->capture_default_str();
  common(simulate);

  auto* randomwalk = app.add_subcommand("randomwalk", "long run recording jumps between wells");
  add_model_options(randomwalk, s);
  add_sim_options(randomwalk, s);
  randomwalk->add_option("--total-time", s.total_time)->capture_default_str();
  randomwalk->add_option("--max-jumps", s.max_jumps);
  common(randomwalk);

  auto* string = app.add_subcommand("string", "minimum energy path between neighbouring wells");
  add_model_options(string, s);
  string->add_option("--images", s.images)->capture_default_str();
  string->add_option("--max-iterations", s.max_iterations)->capture_default_str();
  string->add_option("--tolerance", s.tolerance)->capture_default_str();
  common(string);

  auto* phase = app.add_subcommand("phase", "phase portrait level sets of the stationary ODE");
  phase->add_option("--gamma-beta", s.gamma_beta, "γβ")->capture_default_str();
  phase->add_option("--beta", s.phase_beta, "β")->capture_default_str();
  phase->add_option("--inner-levels", s.inner_levels)->capture_default_str();
  phase->add_option("--outer-levels", s.outer_levels)->capture_default_str();
  phase->add_option("--samples", s.samples, "points per orbit branch")->capture_default_str();
  common(phase);

  auto* galerkin = app.add_subcommand("galerkin", "truncation error against a reference truncation");
  add_model_options(galerkin, s, false);
  add_sim_options(galerkin, s);
  galerkin->add_option("--realizations", s.realizations)->capture_default_str();
  galerkin->add_option("--T", s.T, "final time")->capture_default_str();
  galerkin->add_option("--alpha", s.alpha, "Hölder exponent of the gap norm")->capture_default_str();
  galerkin->add_option("--N-list", s.N_list)->delimiter(',')->capture_default_str();
  galerkin->add_option("--N-ref", s.N_reference)->capture_default_str();
  common(galerkin);

  auto* saddles = app.add_subcommand("saddles", "enumerate and classify stationary saddles");
  add_model_options(saddles, s);
  common(saddles);

  auto* rerun = app.add_subcommand("rerun", "repeat the run described by a manifest");
  rerun->add_option("manifest", s.manifest_path, "manifest.json")->required();
  rerun->add_option("--out", s.out, "output directory (default: the manifest's)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  if (rerun->parsed()) {
    const RunManifest m = read_manifest(s.manifest_path);
    std::vector<std::string> again = m.args;
    const bool out_given = rerun->count("--out") > 0;
    again.push_back("--out");
    again.push_back(out_given ? s.out : fs::path(s.manifest_path).parent_path().string());
    if (again.back().empty()) again.back() = ".";
    return dispatch(again, out, err);
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const std::map<std::string, int> default_N{{"prefactor", 256}, {"bifurcation", 64}, {"string", 64},
                                             {"saddles", 64},    {"simulate", 16},    {"randomwalk", 16},
                                             {"galerkin", 16}};
  if (default_N.count(command)) s.p.N = s.N.value_or(default_N.at(command));
  if (command == "phase") {
    s.p.beta = s.phase_beta;
    s.p.gamma = s.gamma_beta / s.p.beta;
  }
  if (command == "bifurcation" && sub->count("--gamma") == 0) s.p.gamma = 1.0;
  s.c.scheme = parse_scheme(s.scheme);
  s.c.zero_mode = parse_zero_mode(s.zero_mode);
  s.c.delta = s.delta;

  std::vector<std::string> recorded = reproducible_args(args);
  if (!s.timestamp) {
    s.timestamp = timestamp_from_env();
    if (s.timestamp) {
      recorded.push_back("--timestamp");
      recorded.push_back(*s.timestamp);
    }
  }

  s.p.validate();
  s.c.validate();
  const ModelParams& p = s.p;
  const SimConfig& c = s.c;

  const fs::path dir = s.out;
  fs::create_directories(dir);

  Outputs outputs;
  if (command == "prefactor") outputs = cmd_prefactor(p, dir, out);
  else if (command == "bifurcation") outputs = cmd_bifurcation(s, p.N, dir);
  else if (command == "simulate") outputs = cmd_simulate(s, p, c, dir);
  else if (command == "randomwalk") outputs = cmd_randomwalk(s, p, c, dir);
  else if (command == "string") outputs = cmd_string(s, p, dir);
  else if (command == "phase") outputs = cmd_phase(s, dir);
  else if (command == "galerkin") outputs = cmd_galerkin(s, p, c, dir);
  else if (command == "saddles") outputs = cmd_saddles(p, dir);

  RunManifest m;
  m.command = command;
  m.params = p;
  m.config = c;
  m.timestamp = s.timestamp;
  m.code_version = code_version();
  m.seed = c.seed;
  m.args = recorded;
  m.outputs = outputs;
  m.outputs.push_back("manifest.json");
  write_file(dir, "manifest.json", manifest_json(m));
  if (command != "prefactor")
    for (const auto& f : m.outputs) out << (dir / f).string() << '\n';
  return exit_ok;
}

}  // namespace

std::string code_version() { return SGMETA_VERSION; }

std::string manifest_json(const RunManifest& m) {
  json j;
  j["schema_version"] = "sgmeta.manifest/1";
  j["command"] = m.command;
  j["params"] = params_json(m.params);
  j["config"] = config_json(m.config, m.params);
  j["timestamp"] = opt_json(m.timestamp);
  j["code_version"] = m.code_version;
  j["seed"] = m.seed;
  j["args"] = m.args;
  j["outputs"] = m.outputs;
  return dump(j);
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot read manifest " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed manifest: " + std::string(e.what()));
  }
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    const auto& p = j.at("params");
    m.params.gamma = p.at("gamma").get<double>();
    m.params.beta = p.at("beta").get<double>();
    m.params.epsilon = p.at("epsilon").get<double>();
    m.params.N = p.at("N").get<int>();
    m.params.confining_k = p.at("confining_k").get<int>();
    const auto& c = j.at("config");
    m.config.dt = c.at("dt").get<double>();
    m.config.scheme = parse_scheme(c.at("scheme").get<std::string>());
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.max_time = c.at("max_time").get<double>();
    m.config.check_every = c.at("check_every").get<int>();
    m.config.kappa = c.at("kappa").get<double>();
    m.config.delta = c.at("delta").get<double>();
    m.config.c0 = c.at("c0").get<double>();
    m.config.zero_mode = parse_zero_mode(c.at("zero_mode").get<std::string>());
    if (!j.at("timestamp").is_null()) m.timestamp = j.at("timestamp").get<std::string>();
    m.code_version = j.at("code_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed manifest: " + std::string(e.what()));
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace sgmeta::cli
