#ifndef DAMPEDWAVE_COMMANDS_HPP
#define DAMPEDWAVE_COMMANDS_HPP

// Subcommand implementations behind the CLI: single runs, parallel sweeps
// with family-level envelope fits, the appendix lemma harness, the linear
// closed-form verification preset, and report regeneration from stored
// artifacts. Exit codes: 0 success (or global run), 1 error, 2 blow-up.

#include <cstdint>
#include <optional>
#include <string>

namespace dampedwave {

struct CommandOptions {
  std::string out_override;               // --out / DAMPEDWAVE_OUT
  std::optional<std::uint64_t> seed;      // --seed
  int threads = 0;                        // --threads (sweep workers)
  std::optional<double> dt_override;      // --dt-override
  std::string resume_path;                // run: restart from a checkpoint
};

int cmd_run(const std::string& config_path, const CommandOptions& opts);
int cmd_sweep(const std::string& config_path, const CommandOptions& opts);
int cmd_lemma_test(int count, std::uint64_t seed, const CommandOptions& opts);
int cmd_linear_verify(const CommandOptions& opts);
int cmd_report(const std::string& dir);

}  // namespace dampedwave

#endif
