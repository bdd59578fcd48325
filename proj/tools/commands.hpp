#pragma once

#include <iosfwd>

#include "config.hpp"

namespace didq::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitInfeasible = 2,
    kExitCheckFailed = 3,
};

// Each command writes its files under config.output and a short summary to
// `log`, and returns an ExitCode. Library exceptions propagate to run().

/// dimension.csv (scale, count, slope per step) and dimension.json (liminf and
/// limsup estimates).
int cmd_dimension(const ExperimentConfig& config, std::ostream& log);
/// code_n<N>.json per length and build.json; infeasibility_n<N>.json when the
/// typical-projector premise cannot be certified.
int cmd_build(const ExperimentConfig& config, std::ostream& log);
/// verify.json: recomputed errors, oracle comparison and the bound check.
int cmd_verify(const ExperimentConfig& config, std::ostream& log);
/// lemma2.csv: random product pairs against the hypothesis-testing bound.
int cmd_check_lemma2(const ExperimentConfig& config, std::ostream& log);
/// sweep.csv: rates over the configured lengths against d/4 and d/2.
int cmd_sweep(const ExperimentConfig& config, std::ostream& log);
/// sim_compare.csv: classical dimension after sampled measurements against
/// the quantum dimension (heuristic).
int cmd_sim_compare(const ExperimentConfig& config, std::ostream& log);

/// Entry point: parses arguments, runs the subcommand, maps exceptions to
/// exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace didq::cli
