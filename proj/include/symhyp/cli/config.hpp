#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symhyp/error.hpp"
#include "symhyp/grid.hpp"

namespace symhyp::cli {

enum class Experiment { kHypotheses, kSolve, kCarlemanScan, kObservability, kEnergy, kIdentities };

const char* to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view name);

/// Coefficient field as written in a config: a constant matrix, an affine
/// matrix c0 + x*c1, or a reference "<catalog-scenario>:<h0|h1|p>".
struct FieldSpec {
    enum class Kind { kConstant, kAffine, kCatalog };
    Kind kind = Kind::kConstant;
    Matrix c0;
    Matrix c1;
    std::string catalog_id;

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct InlineScenario {
    std::string name = "custom";
    int n = 1;
    FieldSpec h0;
    FieldSpec h1;
    std::optional<FieldSpec> p;  // zero when absent

    friend bool operator==(const InlineScenario&, const InlineScenario&) = default;
};

struct GridConfig {
    double x_lo = 0.0;
    double x_hi = 1.0;
    std::optional<double> T;  // catalog default when absent
    int nx = 201;
    std::optional<int> nt;    // CFL-derived when absent
    double cfl = 0.5;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// eta(x) = a*x + b; beta absent means "auto" (unless the catalog supplies one
/// and beta_auto is false).
struct WeightConfig {
    double a = 1.0;
    double b = 0.0;
    std::optional<double> beta;
    bool beta_auto = false;

    friend bool operator==(const WeightConfig&, const WeightConfig&) = default;
};

struct InitialConfig {
    enum class Kind { kBandLimited, kBump };
    Kind kind = Kind::kBandLimited;
    int modes = 4;
    double decay = 2.0;
    double lo = 0.0;
    double hi = 0.4;

    friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct RunConfig {
    Experiment experiment = Experiment::kHypotheses;
    std::string scenario = "transport";
    std::optional<InlineScenario> inline_scenario;
    GridConfig grid;
    WeightConfig weight;
    std::vector<double> s_grid{1.0, 2.0, 4.0, 8.0, 16.0};
    int ensemble = 20;
    std::uint64_t seed = 1;
    int modes = 4;        // random smooth members
    double decay = 2.0;
    bool refine = true;   // doubled-resolution rerun for scans and identities
    InitialConfig initial;
    std::string output = "out";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Every validation problem found in a config, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Parses a JSON config document. Unknown keys are rejected.
RunConfig parse_config(std::string_view text);

/// JSON document which parse_config maps back to an identical RunConfig.
std::string serialize_config(const RunConfig& config);

/// Checks ranges of an assembled config; returns all problems.
std::vector<std::string> validate_config(const RunConfig& config);

}  // namespace symhyp::cli
