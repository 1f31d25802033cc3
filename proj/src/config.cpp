#include "dampedwave/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "dampedwave/checkpoint.hpp"

namespace dampedwave {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail("missing '" + key + "' in " + where);
  if (!j.at(key).is_number()) fail("'" + key + "' in " + where + " must be a number");
  return j.at(key).get<double>();
}

double get_num_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

DomainConfig parse_domain(const json& j) {
  check_keys(j, {"d", "n", "lengths", "bc", "beta"}, "domain");
  DomainConfig d;
  d.d = j.contains("d") ? j.at("d").get<int>() : 3;
  if (!j.contains("n")) fail("missing 'n' in domain");
  if (j.at("n").is_array())
    d.n = j.at("n").get<std::vector<int>>();
  else
    d.n = {j.at("n").get<int>()};
  if (j.contains("lengths")) {
    if (j.at("lengths").is_array())
      d.lengths = j.at("lengths").get<std::vector<double>>();
    else
      d.lengths = {j.at("lengths").get<double>()};
  }
  if (j.contains("bc")) {
    const std::string bc = j.at("bc").get<std::string>();
    if (bc == "dirichlet")
      d.bc = BoundaryKind::DirichletSine;
    else if (bc == "periodic")
      d.bc = BoundaryKind::PeriodicFourier;
    else
      fail("bc must be 'dirichlet' or 'periodic'");
  }
  d.beta = get_num_or(j, "beta", 0.0);
  return d;
}

std::vector<PowerTerm> parse_nonlinearity(const json& j) {
  if (!j.is_array()) fail("nonlinearity must be a list of {lambda, alpha} terms");
  std::vector<PowerTerm> terms;
  for (const auto& t : j) {
    check_keys(t, {"lambda", "alpha"}, "nonlinearity term");
    terms.push_back({get_num(t, "lambda", "nonlinearity term"),
                     get_num(t, "alpha", "nonlinearity term")});
  }
  return terms;
}

DampingConfig parse_damping(const json& j) {
  if (j.is_number()) return DampingConstant{j.get<double>()};
  if (j.is_string()) {
    // expression form "a*1": a constant profile written as a multiple of
    // the indicator of the whole domain
    const std::string s = j.get<std::string>();
    const auto star = s.find('*');
    if (star == std::string::npos || s.substr(star + 1) != "1")
      fail("damping expression must have the form \"<number>*1\"");
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(s.substr(0, star), &used);
    } catch (const std::exception&) {
      fail("damping expression must start with a number");
    }
    if (used != star) fail("damping expression must start with a number");
    return DampingConstant{a};
  }
  if (j.is_object()) {
    check_keys(j, {"constant", "file"}, "damping");
    if (j.contains("constant") == j.contains("file"))
      fail("damping object needs exactly one of 'constant' or 'file'");
    if (j.contains("constant")) return DampingConstant{j.at("constant").get<double>()};
    return DampingFile{j.at("file").get<std::string>()};
  }
  fail("damping must be a number, an \"a*1\" expression, or {constant|file}");
}

InitialData parse_initial(const json& j) {
  check_keys(j, {"modes", "random", "file"}, "initial");
  const int given = static_cast<int>(j.contains("modes")) +
                    static_cast<int>(j.contains("random")) + static_cast<int>(j.contains("file"));
  if (given != 1) fail("initial needs exactly one of 'modes', 'random', 'file'");
  if (j.contains("modes")) {
    std::vector<ModeInit> modes;
    for (const auto& m : j.at("modes")) {
      check_keys(m, {"k", "amplitude", "velocity"}, "initial mode");
      ModeInit mi;
      if (!m.contains("k")) fail("initial mode needs 'k'");
      mi.k = m.at("k").get<std::vector<int>>();
      mi.amplitude = get_num_or(m, "amplitude", 0.0);
      mi.velocity = get_num_or(m, "velocity", 0.0);
      modes.push_back(std::move(mi));
    }
    if (modes.empty()) fail("initial.modes must not be empty");
    return modes;
  }
  if (j.contains("random")) {
    const json& r = j.at("random");
    check_keys(r, {"seed", "amplitude", "decay"}, "initial.random");
    RandomInit ri;
    ri.seed = r.contains("seed") ? r.at("seed").get<std::uint64_t>() : 1;
    ri.amplitude = get_num_or(r, "amplitude", 1.0);
    ri.decay = get_num_or(r, "decay", 2.0);
    return ri;
  }
  return FileInit{j.at("file").get<std::string>()};
}

StepperConfig parse_stepper(const json& j) {
  check_keys(j, {"dt", "t_end", "blowup_threshold", "sample_every", "dealias", "dt_cap"},
             "stepper");
  StepperConfig s;
  s.dt = get_num(j, "dt", "stepper");
  s.t_end = get_num(j, "t_end", "stepper");
  s.blowup_threshold = get_num_or(j, "blowup_threshold", 1e6);
  s.sample_every = j.contains("sample_every") ? j.at("sample_every").get<int>() : 10;
  s.dealias = j.contains("dealias") ? j.at("dealias").get<bool>() : true;
  s.dt_cap = get_num_or(j, "dt_cap", 0.25);
  return s;
}

OutputsConfig parse_outputs(const json& j) {
  check_keys(j, {"dir", "csv", "checkpoint_every"}, "outputs");
  OutputsConfig o;
  if (j.contains("dir")) o.dir = j.at("dir").get<std::string>();
  if (j.contains("csv")) o.csv = j.at("csv").get<bool>();
  if (j.contains("checkpoint_every"))
    o.checkpoint_every = j.at("checkpoint_every").get<std::int64_t>();
  return o;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  check_keys(j, {"domain", "nonlinearity", "damping", "initial", "stepper", "outputs"},
             "run config");
  for (const char* req : {"domain", "initial", "stepper"})
    if (!j.contains(req)) fail(std::string("missing section '") + req + "'");
  RunConfig cfg;
  cfg.domain = parse_domain(j.at("domain"));
  if (j.contains("nonlinearity")) cfg.nonlinearity = parse_nonlinearity(j.at("nonlinearity"));
  if (j.contains("damping")) cfg.damping = parse_damping(j.at("damping"));
  cfg.initial = parse_initial(j.at("initial"));
  cfg.stepper = parse_stepper(j.at("stepper"));
  if (j.contains("outputs")) cfg.outputs = parse_outputs(j.at("outputs"));
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  return parse_run_config(j);
}

json run_config_to_json(const RunConfig& cfg) {
  json j;
  j["domain"]["d"] = cfg.domain.d;
  j["domain"]["n"] = cfg.domain.n;
  j["domain"]["lengths"] = cfg.domain.lengths;
  j["domain"]["bc"] = cfg.domain.bc == BoundaryKind::DirichletSine ? "dirichlet" : "periodic";
  j["domain"]["beta"] = cfg.domain.beta;

  j["nonlinearity"] = json::array();
  for (const auto& t : cfg.nonlinearity)
    j["nonlinearity"].push_back({{"lambda", t.lambda}, {"alpha", t.alpha}});

  if (const auto* c = std::get_if<DampingConstant>(&cfg.damping))
    j["damping"] = c->value;
  else
    j["damping"] = {{"file", std::get<DampingFile>(cfg.damping).path}};

  if (const auto* modes = std::get_if<std::vector<ModeInit>>(&cfg.initial)) {
    j["initial"]["modes"] = json::array();
    for (const auto& m : *modes)
      j["initial"]["modes"].push_back(
          {{"k", m.k}, {"amplitude", m.amplitude}, {"velocity", m.velocity}});
  } else if (const auto* r = std::get_if<RandomInit>(&cfg.initial)) {
    j["initial"]["random"] = {{"seed", r->seed}, {"amplitude", r->amplitude},
                              {"decay", r->decay}};
  } else {
    j["initial"]["file"] = std::get<FileInit>(cfg.initial).path;
  }

  j["stepper"] = {{"dt", cfg.stepper.dt},
                  {"t_end", cfg.stepper.t_end},
                  {"blowup_threshold", cfg.stepper.blowup_threshold},
                  {"sample_every", cfg.stepper.sample_every},
                  {"dealias", cfg.stepper.dealias},
                  {"dt_cap", cfg.stepper.dt_cap}};
  j["outputs"] = {{"dir", cfg.outputs.dir},
                  {"csv", cfg.outputs.csv},
                  {"checkpoint_every", cfg.outputs.checkpoint_every}};
  return j;
}

SweepConfig parse_sweep_config(const json& j) {
  check_keys(j, {"base", "axes", "parallelism", "max_runs"}, "sweep config");
  if (!j.contains("base") || !j.contains("axes")) fail("sweep needs 'base' and 'axes'");
  SweepConfig s;
  s.base = j.at("base");
  parse_run_config(s.base);  // validate keys up front
  for (const auto& a : j.at("axes")) {
    check_keys(a, {"path", "values"}, "sweep axis");
    SweepAxis axis;
    axis.pointer = a.at("path").get<std::string>();
    if (!a.contains("values") || !a.at("values").is_array() || a.at("values").empty())
      fail("sweep axis needs a nonempty 'values' array");
    for (const auto& v : a.at("values")) axis.values.push_back(v);
    s.axes.push_back(std::move(axis));
  }
  if (j.contains("parallelism")) s.parallelism = j.at("parallelism").get<int>();
  if (j.contains("max_runs")) s.max_runs = j.at("max_runs").get<int>();
  return s;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  return parse_sweep_config(j);
}

std::vector<json> expand_sweep(const SweepConfig& sweep) {
  std::size_t total = 1;
  for (const auto& a : sweep.axes) {
    total *= a.values.size();
    if (total > static_cast<std::size_t>(sweep.max_runs))
      fail("sweep cross product exceeds max_runs = " + std::to_string(sweep.max_runs));
  }
  std::vector<json> out;
  out.reserve(total);
  std::vector<std::size_t> idx(sweep.axes.size(), 0);
  for (std::size_t r = 0; r < total; ++r) {
    json cfg = sweep.base;
    for (std::size_t a = 0; a < sweep.axes.size(); ++a) {
      try {
        cfg[json::json_pointer(sweep.axes[a].pointer)] = sweep.axes[a].values[idx[a]];
      } catch (const json::exception& e) {
        fail("sweep axis path '" + sweep.axes[a].pointer + "': " + e.what());
      }
    }
    out.push_back(std::move(cfg));
    for (std::size_t a = sweep.axes.size(); a-- > 0;) {
      if (++idx[a] < sweep.axes[a].values.size()) break;
      idx[a] = 0;
    }
  }
  return out;
}

MaterializedRun materialize(const RunConfig& cfg) {
  MaterializedRun run;
  run.dom = std::make_shared<SpectralDomain>(cfg.domain);

  const auto pc = run.dom->poincare_check();
  if (!pc.ok)
    fail("Poincare condition fails: lambda1 + beta = " + std::to_string(pc.lambda1_plus_beta) +
         " <= 0");

  run.spec = cfg.nonlinearity.empty() ? NonlinearitySpec::zero()
                                      : NonlinearitySpec::make(cfg.nonlinearity);
  run.hypothesis = hypothesis_report(run.spec, run.dom->dim());

  if (const auto* c = std::get_if<DampingConstant>(&cfg.damping)) {
    if (c->value < 0.0) fail("damping must be >= 0");
    run.damping = DampingProfile::constant(*run.dom, c->value);
  } else {
    run.damping = DampingProfile::from_grid(
        *run.dom, read_raw_field(std::get<DampingFile>(cfg.damping).path, *run.dom));
  }
  run.gamma_inf = run.damping->gamma_inf();

  if (const auto* modes = std::get_if<std::vector<ModeInit>>(&cfg.initial)) {
    SpectralField u_hat = run.dom->make_spectral_field();
    SpectralField v_hat = run.dom->make_spectral_field();
    for (const auto& m : *modes) {
      if (m.amplitude != 0.0) {
        auto part = run.dom->mode_field(m.k, m.amplitude);
        kernels::active().axpy(1.0, part.coeffs.data(), u_hat.coeffs.data(),
                               u_hat.coeffs.size());
      }
      if (m.velocity != 0.0) {
        auto part = run.dom->mode_field(m.k, m.velocity);
        kernels::active().axpy(1.0, part.coeffs.data(), v_hat.coeffs.data(),
                               v_hat.coeffs.size());
      }
    }
    run.initial = state_from_spectral(*run.dom, 0.0, std::move(u_hat), std::move(v_hat));
  } else if (const auto* r = std::get_if<RandomInit>(&cfg.initial)) {
    std::mt19937_64 rng(r->seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField u_hat = run.dom->make_spectral_field();
    const auto& mu = run.dom->eigenvalues();
    for (std::size_t s = 0; s < u_hat.coeffs.size(); ++s)
      u_hat.coeffs[s] = r->amplitude * gauss(rng) / std::pow(1.0 + mu[s], 0.5 * r->decay);
    run.initial =
        state_from_spectral(*run.dom, 0.0, std::move(u_hat), run.dom->make_spectral_field());
  } else {
    run.initial = read_checkpoint(std::get<FileInit>(cfg.initial).path, *run.dom);
  }

  run.stepper = cfg.stepper;
  run.outputs = cfg.outputs;
  if (!(run.stepper.dt > 0.0) || run.stepper.dt > run.stepper.dt_cap)
    fail("stepper.dt must satisfy 0 < dt <= dt_cap");
  if (!(run.stepper.t_end > run.initial.t)) fail("stepper.t_end must exceed the initial time");
  if (run.stepper.sample_every < 1) fail("stepper.sample_every must be >= 1");
  return run;
}

}  // namespace dampedwave
