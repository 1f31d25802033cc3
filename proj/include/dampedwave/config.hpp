#ifndef DAMPEDWAVE_CONFIG_HPP
#define DAMPEDWAVE_CONFIG_HPP

// Run and sweep configuration: JSON with nested sections, strictly
// validated (unknown keys are hard errors so a misspelled exponent cannot
// slip through). A sweep is a base run configuration plus axes addressed
// by JSON Pointer, expanded as a cross product.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dampedwave/integrator.hpp"

namespace dampedwave {

struct ModeInit {
  std::vector<int> k;
  double amplitude = 0.0;
  double velocity = 0.0;
};

struct RandomInit {
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  double decay = 2.0;
};

struct FileInit {
  std::string path;
};

using InitialData = std::variant<std::vector<ModeInit>, RandomInit, FileInit>;

struct DampingConstant {
  double value = 0.0;
};
struct DampingFile {
  std::string path;
};
using DampingConfig = std::variant<DampingConstant, DampingFile>;

struct OutputsConfig {
  std::string dir = "out";
  bool csv = true;
  std::int64_t checkpoint_every = 0;  // steps; 0 disables periodic checkpoints
};

struct RunConfig {
  DomainConfig domain;
  std::vector<PowerTerm> nonlinearity;  // empty list = zero map
  DampingConfig damping;
  InitialData initial;
  StepperConfig stepper;
  OutputsConfig outputs;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Round-trip of the resolved configuration for embedding into summaries.
nlohmann::json run_config_to_json(const RunConfig& cfg);

struct SweepAxis {
  std::string pointer;  // JSON Pointer into the run configuration
  std::vector<nlohmann::json> values;
};

struct SweepConfig {
  nlohmann::json base;
  std::vector<SweepAxis> axes;
  int parallelism = 0;  // 0 = hardware concurrency
  int max_runs = 256;
};

SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::string& path);

// Cross product of the axes applied to the base config; throws when the
// expansion exceeds max_runs.
std::vector<nlohmann::json> expand_sweep(const SweepConfig& sweep);

// Fully constructed run inputs. Construction enforces the Poincare
// condition, gamma >= 0, the stepper bounds, and evaluates the hypothesis
// report (callers decide how to surface out-of-scope warnings).
struct MaterializedRun {
  std::shared_ptr<SpectralDomain> dom;
  NonlinearitySpec spec = NonlinearitySpec::zero();
  std::optional<DampingProfile> damping;
  WaveState initial;
  StepperConfig stepper;
  OutputsConfig outputs;
  HypothesisReport hypothesis{};
  double gamma_inf = 0.0;
};

MaterializedRun materialize(const RunConfig& cfg);

}  // namespace dampedwave

#endif
