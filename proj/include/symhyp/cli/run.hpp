#pragma once

#include <iosfwd>
#include <optional>

#include "symhyp/cli/config.hpp"
#include "symhyp/hypotheses.hpp"
#include "symhyp/scenario.hpp"

namespace symhyp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // hypothesis refusal or invariant violation
inline constexpr int kExitUsage = 2;        // invalid command line or config
inline constexpr int kExitIo = 3;

struct ResolvedScenario {
    Scenario scenario;
    std::optional<BetaSelection> auto_beta;  // set when beta was "auto"
};

/// Turns a config into a concrete Scenario: fields from the catalog or the
/// inline definition, T and beta defaults, CFL-derived Nt when nt is
/// absent, and beta = "auto" resolved by select_beta. Throws
/// HypothesisRefusal if "auto" cannot be resolved.
ResolvedScenario resolve_scenario(const RunConfig& config);

/// Executes one experiment, writes CSV artifacts and summary.txt into
/// config.output and the summary to `out`. Returns an exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace symhyp::cli
