#include "dampedwave/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dampedwave/checkpoint.hpp"
#include "dampedwave/config.hpp"
#include "dampedwave/verifier.hpp"

namespace dampedwave {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kFormatVersion = "1";

std::string resolve_out_dir(const std::string& config_dir, const CommandOptions& opts) {
  if (const char* env = std::getenv("DAMPEDWAVE_OUT")) return env;
  if (!opts.out_override.empty()) return opts.out_override;
  return config_dir;
}

json verdict_to_json(const EstimateVerdict& v) {
  json j;
  j["name"] = v.name;
  j["holds"] = v.holds;
  j["margin"] = v.margin;
  j["details"] = v.details;
  j["fitted_constants"] = json::object();
  for (const auto& [k, x] : v.fitted) j["fitted_constants"][k] = x;
  return j;
}

json skipped_verdict(const std::string& name, const std::string& reason) {
  return json{{"name", name}, {"skipped", true}, {"reason", reason}};
}

const char* kind_str(RunKind k) { return k == RunKind::Global ? "global" : "blowup"; }

const char* reason_str(StopReason r) {
  switch (r) {
    case StopReason::HorizonReached: return "horizon_reached";
    case StopReason::NormExceeded: return "norm_exceeded";
    default: return "non_finite";
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

struct RunArtifacts {
  RunOutcome outcome;
  json summary;
  bool global = false;
  double abs_E0 = 0.0;
  double inf_E = 0.0;
  double fitted_A = 0.0;
  double fitted_K = 0.0;
  double sup_norm = 0.0;
  double s0 = 0.0;
  double gamma_inf = 0.0;
  std::vector<GridField> snapshots;
};

RunArtifacts run_one(const RunConfig& cfg, const fs::path& dir, const std::string& label,
                     bool collect_snapshots) {
  fs::create_directories(dir);
  MaterializedRun run = materialize(cfg);
  if (run.hypothesis.theorem_dimension && !run.hypothesis.subcritical_i_ii)
    std::fprintf(stderr,
                 "warning: p = %g is not subcritical for d = %d; the uniform estimates "
                 "are outside theorem scope\n",
                 run.hypothesis.p, run.dom->dim());
  if (!run.hypothesis.theorem_dimension)
    std::fprintf(stderr, "warning: d = %d is outside theorem scope (d >= 3)\n",
                 run.dom->dim());

  RunArtifacts art;
  art.gamma_inf = run.gamma_inf;

  EvolveCallbacks cbs;
  cbs.checkpoint_every = run.outputs.checkpoint_every;
  if (cbs.checkpoint_every > 0)
    cbs.on_checkpoint = [&](const WaveState& st, std::int64_t step) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoint_%09lld.dwck",
                    static_cast<long long>(step));
      write_checkpoint((dir / name).string(), *run.dom, st);
    };
  int sample_index = 0;
  if (collect_snapshots)
    cbs.on_sample = [&](const WaveState& st) {
      if (sample_index++ % 10 == 0) art.snapshots.push_back(st.u);
    };

  art.outcome = evolve(*run.dom, run.spec, *run.damping, run.initial, run.stepper, &cbs);
  const auto& samples = art.outcome.samples;
  art.global = art.outcome.kind == RunKind::Global;

  if (run.outputs.csv) {
    std::ostringstream csv;
    csv << kCsvHeader << "\n";
    for (const auto& s : samples) write_csv_row(csv, s);
    write_text(dir / "series.csv", csv.str());
  }
  write_checkpoint((dir / "final.dwck").string(), *run.dom, art.outcome.final_state);

  const double sample_dt = run.stepper.dt * run.stepper.sample_every;
  double residual = std::numeric_limits<double>::quiet_NaN();
  if (samples.size() >= 2) residual = dissipation_residual(samples, sample_dt);

  art.abs_E0 = std::fabs(samples.front().E);
  art.s0 = samples.front().h1_u + samples.front().l2_v;
  art.inf_E = samples.front().E;
  for (const auto& s : samples) {
    art.inf_E = std::min(art.inf_E, s.E);
    art.sup_norm = std::max(art.sup_norm, std::sqrt(s.h1_u + s.l2_v));
  }

  json verdicts = json::array();
  if (samples.size() >= 2) {
    const double tol = 10.0 * residual + 1e-12 * std::max(1.0, art.abs_E0);
    verdicts.push_back(verdict_to_json(check_energy_monotone_and_bounded(samples, tol)));
  }
  if (art.global && samples.size() >= 2) {
    auto l2v = check_l2_exponential_shape(samples, art.abs_E0);
    art.fitted_A = l2v.fitted.at("A");
    verdicts.push_back(verdict_to_json(l2v));
    auto mpv = check_mprime_bounds(samples, art.abs_E0);
    art.fitted_K = mpv.fitted.at("K");
    verdicts.push_back(verdict_to_json(mpv));
    if (run.hypothesis.part_iii_applicable)
      verdicts.push_back(verdict_to_json(check_h1_uniform(samples, art.s0, true)));
    else
      verdicts.push_back(skipped_verdict("h1_uniform", "exponent gate p <= d/(d-2) fails"));
  } else if (!art.global) {
    for (const char* n : {"l2_exponential_shape", "mprime_bounds", "h1_uniform"})
      verdicts.push_back(skipped_verdict(n, "blow-up run"));
  }

  json summary;
  summary["format_version"] = kFormatVersion;
  summary["label"] = label;
  summary["config"] = run_config_to_json(cfg);
  summary["hypothesis"] = {{"theorem_dimension", run.hypothesis.theorem_dimension},
                           {"subcritical_i_ii", run.hypothesis.subcritical_i_ii},
                           {"part_iii_applicable", run.hypothesis.part_iii_applicable},
                           {"p", run.hypothesis.p},
                           {"p0", run.hypothesis.p0},
                           {"epsilon", run.hypothesis.epsilon}};
  summary["outcome"] = {{"kind", kind_str(art.outcome.kind)},
                        {"reason", reason_str(art.outcome.reason)},
                        {"t_final", art.outcome.t_final},
                        {"blowup_confirmed", art.outcome.blowup_confirmed}};
  if (!samples.empty()) {
    const auto& last = samples.back();
    summary["final"] = {{"t", last.t},
                        {"E", last.E},
                        {"E_lin", last.E_lin},
                        {"M", last.M},
                        {"norm_h1xl2", std::sqrt(last.h1_u + last.l2_v)}};
  }
  if (samples.size() >= 2) summary["dissipation_residual"] = residual;
  summary["verdicts"] = verdicts;
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  art.summary = std::move(summary);
  return art;
}

std::vector<DiagnosticsSample> read_series_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty series " + path.string());
  if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header in " + path.string());
  std::vector<DiagnosticsSample> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    DiagnosticsSample s{};
    double* fields[13] = {&s.t,    &s.E,    &s.E_lin, &s.M,    &s.Mp,     &s.Mpp,   &s.l2_u,
                          &s.l2_v, &s.h1_u, &s.intF,  &s.intUf, &s.intGuv, &s.intGvv};
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < 13; ++i) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short CSV row in " + path.string());
      *fields[i] = std::stod(cell);
    }
    out.push_back(s);
  }
  return out;
}

RunConfig apply_overrides(RunConfig cfg, const CommandOptions& opts) {
  if (opts.dt_override) cfg.stepper.dt = *opts.dt_override;
  if (opts.seed) {
    if (auto* r = std::get_if<RandomInit>(&cfg.initial)) r->seed = *opts.seed;
  }
  return cfg;
}

json family_rollup(const std::vector<RunArtifacts>& arts, const MaterializedRun& base,
                   const RunConfig& base_cfg) {
  json fam;
  fam["format_version"] = kFormatVersion;
  fam["base_config"] = run_config_to_json(base_cfg);

  std::vector<std::pair<double, double>> a_vs_e, norm_vs_s0;
  double floor_inf = std::numeric_limits<double>::infinity();
  json runs = json::array();
  for (const auto& a : arts) {
    json r;
    r["label"] = a.summary.value("label", "");
    r["kind"] = a.global ? "global" : "blowup";
    r["abs_E0"] = a.abs_E0;
    r["inf_E"] = a.inf_E;
    r["gamma_inf"] = a.gamma_inf;
    r["sup_norm"] = a.sup_norm;
    r["s0"] = a.s0;
    if (a.global) {
      r["fitted_A"] = a.fitted_A;
      r["fitted_K"] = a.fitted_K;
      a_vs_e.push_back({a.abs_E0, a.fitted_A});
      norm_vs_s0.push_back({a.s0, a.sup_norm});
      floor_inf = std::min(floor_inf, a.inf_E);
    }
    runs.push_back(std::move(r));
  }
  fam["runs"] = runs;

  if (std::isfinite(floor_inf)) {
    fam["energy_floor"] = {{"inf_E", floor_inf}, {"C_emp", std::max(0.0, -floor_inf)}};
  }
  if (!a_vs_e.empty()) {
    auto env = affine_upper_envelope(a_vs_e);
    fam["l2_envelope"] = {{"a0", env.a0}, {"a1", env.a1}, {"min_margin", env.min_margin}};
  }
  if (!norm_vs_s0.empty()) {
    const double c = fit_exponential_envelope(norm_vs_s0);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [s, sup] : norm_vs_s0)
      worst = std::min(worst, c * std::exp(c * s) - sup);
    fam["h1_envelope"] = {{"c", c}, {"min_margin", worst}};
  }

  // empirical hyp_f_3 constant and the implied I0 per damping level
  if (!base.spec.is_zero()) {
    std::vector<GridField> family_fields;
    const std::vector<GridField>* snaps = nullptr;
    for (const auto& a : arts)
      if (!a.snapshots.empty()) {
        snaps = &a.snapshots;
        break;
      }
    family_fields = default_hyp3_field_family(
        *base.dom, 1234,
        snaps ? std::span<const GridField>(*snaps) : std::span<const GridField>());
    const double c0 = estimate_hyp3_constant(*base.dom, base.spec, family_fields);
    fam["hyp3_C0"] = c0;
    json i0s = json::array();
    for (const auto& a : arts) {
      const double i0 =
          i0_formula(c0, a.gamma_inf, base.spec.epsilon(), base.spec.p0());
      i0s.push_back({{"label", a.summary.value("label", "")},
                     {"gamma_inf", a.gamma_inf},
                     {"I0", i0},
                     {"energy_floor_ok_informative", a.inf_E >= -i0}});
    }
    fam["i0"] = i0s;
  }
  return fam;
}

}  // namespace

int cmd_run(const std::string& config_path, const CommandOptions& opts) {
  try {
    RunConfig cfg = apply_overrides(load_run_config(config_path), opts);
    if (!opts.resume_path.empty()) cfg.initial = FileInit{opts.resume_path};
    const fs::path dir = resolve_out_dir(cfg.outputs.dir, opts);
    RunArtifacts art = run_one(cfg, dir, "run", false);
    std::printf("run: %s at t = %.6g (reason: %s)%s\n", kind_str(art.outcome.kind),
                art.outcome.t_final, reason_str(art.outcome.reason),
                art.outcome.kind == RunKind::BlowUp
                    ? (art.outcome.blowup_confirmed ? " [confirmed at dt/2]" : " [unconfirmed]")
                    : "");
    std::printf("run: artifacts in %s\n", dir.string().c_str());
    return art.outcome.kind == RunKind::Global ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_sweep(const std::string& config_path, const CommandOptions& opts) {
  try {
    SweepConfig sweep = load_sweep_config(config_path);
    std::vector<json> grid = expand_sweep(sweep);

    RunConfig base_cfg = apply_overrides(parse_run_config(sweep.base), opts);
    const fs::path out_dir = resolve_out_dir(base_cfg.outputs.dir, opts);
    fs::create_directories(out_dir);

    int threads = opts.threads > 0 ? opts.threads
                  : sweep.parallelism > 0
                      ? sweep.parallelism
                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));

    std::vector<RunArtifacts> arts(grid.size());
    std::vector<std::string> errors(grid.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= grid.size()) return;
        char label[32];
        std::snprintf(label, sizeof label, "run_%03zu", i);
        try {
          RunConfig cfg = apply_overrides(parse_run_config(grid[i]), opts);
          arts[i] = run_one(cfg, out_dir / label, label, i == 0);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    json index;
    index["format_version"] = kFormatVersion;
    {
      json axes = json::array();
      for (const auto& a : sweep.axes) {
        json vals = json::array();
        for (const auto& v : a.values) vals.push_back(v);
        axes.push_back({{"path", a.pointer}, {"values", vals}});
      }
      index["sweep_config"] = {{"base", sweep.base},
                               {"axes", axes},
                               {"parallelism", threads},
                               {"max_runs", sweep.max_runs}};
    }
    json run_list = json::array();
    int failures = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      char label[32];
      std::snprintf(label, sizeof label, "run_%03zu", i);
      json r = {{"label", label}};
      if (!errors[i].empty()) {
        r["error"] = errors[i];
        ++failures;
      } else {
        r["kind"] = arts[i].global ? "global" : "blowup";
      }
      run_list.push_back(std::move(r));
    }
    index["runs"] = run_list;
    write_text(out_dir / "sweep_index.json", index.dump(2) + "\n");

    std::vector<RunArtifacts> completed;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (errors[i].empty()) completed.push_back(std::move(arts[i]));
    if (!completed.empty()) {
      MaterializedRun base = materialize(base_cfg);
      write_text(out_dir / "family.json",
                 family_rollup(completed, base, base_cfg).dump(2) + "\n");
    }

    std::printf("sweep: %zu runs, %d errors, artifacts in %s\n", grid.size(), failures,
                out_dir.string().c_str());
    return failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_lemma_test(int count, std::uint64_t seed, const CommandOptions& opts) {
  try {
    const fs::path dir = resolve_out_dir("out", opts);
    fs::create_directories(dir);
    auto catalog = make_lemma_catalog(count, seed);
    auto rep = run_lemma_catalog(catalog);

    json j;
    j["format_version"] = kFormatVersion;
    j["count"] = rep.total;
    j["seed"] = seed;
    j["hypothesis_satisfied"] = rep.hypothesis_satisfied;
    j["conclusion_failures"] = rep.conclusion_failures;
    j["label_mismatches"] = rep.label_mismatches;
    json cases = json::array();
    for (const auto& c : rep.cases)
      cases.push_back({{"name", c.spec.name},
                       {"lemma", c.spec.lemma},
                       {"param", c.spec.param},
                       {"expected", c.spec.expected},
                       {"outcome", c.outcome},
                       {"holds", c.verdict.holds},
                       {"margin", c.verdict.margin}});
    j["cases"] = cases;
    write_text(dir / "lemma_report.json", j.dump(2) + "\n");

    std::printf("lemma-test: %d cases, %d hypothesis-satisfying, %d conclusion failures\n",
                rep.total, rep.hypothesis_satisfied, rep.conclusion_failures);
    return rep.conclusion_failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_linear_verify(const CommandOptions& opts) {
  try {
    const fs::path dir = resolve_out_dir("out", opts);
    fs::create_directories(dir);

    DomainConfig dc;
    dc.d = 3;
    dc.n = {8};
    SpectralDomain dom(dc);
    auto none = NonlinearitySpec::zero();
    const std::vector<int> k{1, 1, 1};
    const double w0sq = dom.mode_eigenvalue(k);

    StepperConfig sc;
    sc.dt = opts.dt_override.value_or(1e-3);
    sc.t_end = 3.0;
    sc.sample_every = 10;

    auto run_mode = [&](double gamma) {
      auto damping = DampingProfile::constant(dom, gamma);
      WaveState init =
          state_from_spectral(dom, 0.0, dom.mode_field(k, 1.0), dom.make_spectral_field());
      double worst = 0.0;
      EvolveCallbacks cbs;
      cbs.on_sample = [&](const WaveState& st) {
        double expect;
        if (gamma == 0.0) {
          expect = std::cos(std::sqrt(w0sq) * st.t);
        } else {
          const double w = std::sqrt(w0sq - 0.25 * gamma * gamma);
          expect = std::exp(-0.5 * gamma * st.t) *
                   (std::cos(w * st.t) + 0.5 * gamma / w * std::sin(w * st.t));
        }
        worst = std::max(worst, std::fabs(dom.mode_coefficient(st.u_hat, k) - expect));
      };
      evolve(dom, none, damping, init, sc, &cbs);
      return worst;
    };

    const double undamped = run_mode(0.0);
    const double damped = run_mode(1.0);

    json j;
    j["format_version"] = kFormatVersion;
    j["dt"] = sc.dt;
    j["t_end"] = sc.t_end;
    j["undamped_error"] = undamped;
    j["error_vs_closed_form"] = damped;
    write_text(dir / "linear_verify.json", j.dump(2) + "\n");

    std::printf("linear-verify: undamped max error %.3e, damped max error %.3e (dt = %g)\n",
                undamped, damped, sc.dt);
    const bool ok = undamped <= 1e-10 && damped <= 1e-6;
    if (!ok) std::fprintf(stderr, "linear-verify: closed-form comparison failed\n");
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_report(const std::string& dir_in) {
  try {
    const fs::path dir(dir_in);
    if (fs::exists(dir / "summary.json")) {
      std::ifstream is(dir / "summary.json");
      json summary;
      is >> summary;
      auto samples = read_series_csv(dir / "series.csv");
      if (samples.size() < 2) throw std::runtime_error("report: series too short");

      const bool global = summary.at("outcome").at("kind") == "global";
      const double abs_e0 = std::fabs(samples.front().E);
      const double s0 = samples.front().h1_u + samples.front().l2_v;
      const double dt_sample = samples[1].t - samples[0].t;
      const double residual = dissipation_residual(samples, dt_sample);
      const double tol = 10.0 * residual + 1e-12 * std::max(1.0, abs_e0);

      json verdicts = json::array();
      verdicts.push_back(verdict_to_json(check_energy_monotone_and_bounded(samples, tol)));
      if (global) {
        verdicts.push_back(verdict_to_json(check_l2_exponential_shape(samples, abs_e0)));
        verdicts.push_back(verdict_to_json(check_mprime_bounds(samples, abs_e0)));
        const bool applicable =
            summary.at("hypothesis").value("part_iii_applicable", false);
        if (applicable)
          verdicts.push_back(verdict_to_json(check_h1_uniform(samples, s0, true)));
        else
          verdicts.push_back(skipped_verdict("h1_uniform", "exponent gate p <= d/(d-2) fails"));
      }
      json rep;
      rep["format_version"] = kFormatVersion;
      rep["config"] = summary.at("config");
      rep["dissipation_residual"] = residual;
      rep["verdicts"] = verdicts;
      write_text(dir / "verdicts.json", rep.dump(2) + "\n");
      for (const auto& v : verdicts) {
        if (v.contains("skipped"))
          std::printf("%-28s skipped (%s)\n", v.at("name").get<std::string>().c_str(),
                      v.at("reason").get<std::string>().c_str());
        else
          std::printf("%-28s holds=%s margin=%.6g\n", v.at("name").get<std::string>().c_str(),
                      v.at("holds").get<bool>() ? "yes" : "no", v.at("margin").get<double>());
      }
      return 0;
    }
    if (fs::exists(dir / "sweep_index.json")) {
      std::ifstream is(dir / "sweep_index.json");
      json index;
      is >> index;
      int reported = 0;
      for (const auto& r : index.at("runs")) {
        if (r.contains("error")) continue;
        const std::string label = r.at("label").get<std::string>();
        std::printf("-- %s --\n", label.c_str());
        if (cmd_report((dir / label).string()) != 0) return 1;
        ++reported;
      }
      std::printf("report: regenerated verdicts for %d runs\n", reported);
      return 0;
    }
    throw std::runtime_error("report: no summary.json or sweep_index.json in " + dir_in);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace dampedwave
