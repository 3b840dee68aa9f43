#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symhyp/cli/catalog.hpp"
#include "symhyp/cli/config.hpp"
#include "symhyp/cli/run.hpp"
#include "symhyp/estimator.hpp"

using namespace symhyp;
using namespace symhyp::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("symhyp_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v) {
        if (s.find(needle) != std::string::npos) return true;
    }
    return false;
}

struct RunOutput {
    int status;
    std::string out;
    std::string err;
};

RunOutput run_config(const RunConfig& c) {
    std::ostringstream out, err;
    const int status = run(c, out, err);
    return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const RunConfig c = parse_config(R"({"scenario": "transport"})");
    CHECK(c == RunConfig{});
    CHECK(c.grid.nx == 201);
    CHECK_FALSE(c.grid.nt.has_value());
    CHECK(c.s_grid == std::vector<double>{1, 2, 4, 8, 16});
}

TEST_CASE("auto beta resolves to 0.75 for transport with T = 2") {
    RunConfig c = parse_config(R"({"scenario": "transport", "grid": {"T": 2, "nx": 21}, "weight": {"beta": "auto"}})");
    CHECK(c.weight.beta_auto);
    const ResolvedScenario r = resolve_scenario(c);
    REQUIRE(r.auto_beta.has_value());
    CHECK(r.scenario.weight.beta == doctest::Approx(0.75));

    c.output = scratch("auto").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitOk);
    CHECK(o.out.find("beta = 0.75 (auto") != std::string::npos);
    const RunConfig recorded = parse_config(slurp(fs::path(c.output) / "config.resolved.json"));
    CHECK(recorded.weight.beta == 0.75);
    CHECK_FALSE(recorded.weight.beta_auto);
}

TEST_CASE("auto beta with an empty interval is a refusal") {
    RunConfig c = parse_config(R"({"scenario": "transport", "grid": {"T": 1, "nx": 21}, "weight": {"beta": "auto"}})");
    CHECK_THROWS_AS(resolve_scenario(c), HypothesisRefusal);
    c.output = scratch("auto_refused").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitCheckFailed);
    CHECK(o.out.find("hypothesis = time-horizon") != std::string::npos);
}

TEST_CASE("Nx = 2 is rejected with a readable message") {
    const auto p = problems_of(R"({"grid": {"nx": 2}})");
    CHECK(contains(p, "Nx must be ≥ 3"));
}

TEST_CASE("all validation problems are reported together") {
    const auto p = problems_of(
        R"({"scenario": "nope", "grid": {"nx": 0, "nt": 1, "T": -1}, "ensemble": 0, "s_grid": [1, -2], "extra": 1})");
    CHECK(contains(p, "unknown scenario 'nope'"));
    CHECK(contains(p, "Nx must be"));
    CHECK(contains(p, "Nt must be"));
    CHECK(contains(p, "T must be > 0"));
    CHECK(contains(p, "ensemble"));
    CHECK(contains(p, "s_grid"));
    CHECK(contains(p, "unknown key 'extra'"));
    CHECK(p.size() >= 7);
}

TEST_CASE("malformed matrix literals are rejected") {
    CHECK(contains(problems_of(R"({"scenario": {"n": 2, "h0": {"constant": [[1, 0], [0]]}, "h1": "transport:h1"}})"),
                   "malformed matrix literal"));
    CHECK(contains(problems_of(R"({"scenario": {"n": 2, "h0": {"constant": [[1, "a"], [0, 1]]}, "h1": {"constant": [[1, 0], [0, 1]]}}})"),
                   "non-numeric"));
    CHECK(contains(problems_of(R"({"scenario": {"n": 2, "h0": {"constant": [[1, 2], [0, 1]]}, "h1": {"constant": [[1, 0], [0, 1]]}}})"),
                   "must be symmetric"));
    CHECK(contains(problems_of(R"({"scenario": {"n": 1, "h0": "nowhere:h0", "h1": "transport:h1"}})"),
                   "unknown catalog field"));
    CHECK(contains(problems_of("{not json"), "document"));
}

TEST_CASE("parse then serialize then parse is the identity") {
    const std::vector<std::string> docs{
        R"({"scenario": "coupled-spd"})",
        R"({"experiment": "carleman-scan", "scenario": "coupled-varying", "grid": {"x_lo": -0.5, "x_hi": 2.25,
            "T": 3.1, "nx": 77, "nt": 901, "cfl": 0.4}, "weight": {"eta": {"linear": {"a": 2.5, "b": -0.1}},
            "beta": 0.3}, "s_grid": [0.5, 3], "ensemble": 4, "seed": 18446744073709551615, "modes": 6,
            "decay": 1.5, "refine": false, "output": "elsewhere"})",
        R"({"experiment": "observability", "scenario": {"name": "mine", "n": 2,
            "h0": {"constant": [[2, 0.1], [0.1, 1]]}, "h1": {"affine": {"c0": [[1, 0], [0, 2]], "c1": [[0.5, 0], [0, 0]]}},
            "p": {"constant": [[0, 1], [-1, 0]]}}, "weight": {"beta": "auto"},
            "initial": {"kind": "bump", "support": [0.1, 0.3]}})",
    };
    for (const auto& d : docs) {
        const RunConfig a = parse_config(d);
        const RunConfig b = parse_config(serialize_config(a));
        CHECK(a == b);
    }
}

TEST_CASE("catalog contents") {
    CHECK(catalog().size() >= 4);
    for (const char* name : {"transport", "coupled-spd", "coupled-varying", "wave-type"}) {
        CHECK(find_catalog_entry(name) != nullptr);
    }
    std::ostringstream os;
    list_scenarios(os);
    const std::string text = os.str();
    const auto line_of = [&](const std::string& name) {
        const auto pos = text.find(name + "  ");
        return text.substr(pos, text.find('\n', text.find('\n', pos) + 1) - pos);
    };
    CHECK(line_of("transport").find("OK delta=0.25 delta0=1 delta1=1 M=1 T_min=1") != std::string::npos);
    CHECK(line_of("coupled-spd").find("M=3 T_min=3") != std::string::npos);
    CHECK(line_of("wave-type").find("FAILS-weight-positivity") != std::string::npos);
    CHECK(line_of("wave-type").find("delta=-1.5") != std::string::npos);  // -beta - 1 at beta = 0.5
    CHECK(catalog_field("coupled-spd:h1").has_value());
    CHECK_FALSE(catalog_field("coupled-spd:h7").has_value());
}

TEST_CASE("inline scenario with T below T_min cannot resolve auto beta") {
    const RunConfig c = parse_config(R"({"scenario": {"n": 2, "h0": "coupled-spd:h0", "h1": "coupled-spd:h1"},
        "grid": {"nx": 11, "T": 2}})");
    try {
        resolve_scenario(c);
        FAIL("expected refusal");
    } catch (const HypothesisRefusal& r) {
        CHECK(r.hypothesis() == hypothesis::kHorizon);
        REQUIRE(r.report().T_min.has_value());
        CHECK(*r.report().T_min == doctest::Approx(3.0));
    }
}

TEST_CASE("inline scenario resolves to concrete fields") {
    RunConfig c = parse_config(R"({"scenario": {"name": "mine", "n": 2, "h0": "coupled-spd:h0",
        "h1": {"affine": {"c0": [[2, 1], [1, 2]], "c1": [[1, 0], [0, 0]]}}}, "grid": {"nx": 11, "T": 4}})");
    const ResolvedScenario r = resolve_scenario(c);
    CHECK(r.scenario.name == "mine");
    CHECK(r.scenario.grid.T() == 4.0);
    REQUIRE(r.auto_beta.has_value());  // inline scenarios default to auto beta
    CHECK(r.scenario.h1(0.5, 0.0)(0, 0) == 2.5);
    CHECK(r.scenario.grid.nt() == cfl_time_nodes(r.scenario, 0.5));
}

TEST_CASE("hypotheses experiment on wave-type fails and names both hypotheses") {
    RunConfig c;
    c.scenario = "wave-type";
    c.grid.nx = 21;
    c.output = scratch("wave").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitCheckFailed);
    CHECK(o.out.find("verdict.weight-positivity = FAIL") != std::string::npos);
    CHECK(o.out.find("verdict.eta-gradient-positivity = FAIL") != std::string::npos);
    CHECK(fs::exists(fs::path(c.output) / "boundary.csv"));
    CHECK(fs::exists(fs::path(c.output) / "summary.txt"));
}

TEST_CASE("carleman-scan writes |s_grid| x ensemble rows") {
    RunConfig c;
    c.experiment = Experiment::kCarlemanScan;
    c.scenario = "coupled-spd";
    c.grid.nx = 21;
    c.ensemble = 3;
    c.s_grid = {1, 4, 16};
    c.refine = false;
    c.output = scratch("scan").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitOk);
    CHECK(lines(slurp(fs::path(c.output) / "carleman_terms.csv")) == 1 + 3 * 3);
}

TEST_CASE("carleman-scan on wave-type is refused with a witness") {
    RunConfig c;
    c.experiment = Experiment::kCarlemanScan;
    c.scenario = "wave-type";
    c.grid.nx = 21;
    c.output = scratch("scan_refused").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitCheckFailed);
    CHECK(o.out.find("hypothesis = weight-positivity") != std::string::npos);
    CHECK(o.out.find("witness.value = -1.5") != std::string::npos);
}

TEST_CASE("observability counterexample config produces a counterexample block") {
    RunConfig c = parse_config(R"({"experiment": "observability", "scenario": "transport", "grid": {"T": 0.5, "nx": 201},
        "initial": {"kind": "bump", "support": [0, 0.4]}})");
    c.output = scratch("counter").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitOk);
    CHECK(o.out.find("[counterexample]") != std::string::npos);
    CHECK(o.out.find("warning = ") != std::string::npos);
}

TEST_CASE("identical configs give identical CSV bytes") {
    for (Experiment e : {Experiment::kSolve, Experiment::kCarlemanScan, Experiment::kEnergy, Experiment::kIdentities}) {
        RunConfig c;
        c.experiment = e;
        c.scenario = "coupled-varying";
        c.grid.nx = 21;
        c.ensemble = 2;
        c.seed = 42;
        const fs::path a = scratch("det_a"), b = scratch("det_b");
        c.output = a.string();
        const int first = run_config(c).status;
        c.output = b.string();
        CHECK(run_config(c).status == first);
        int compared = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            if (entry.path().extension() != ".csv") continue;
            CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
            ++compared;
        }
        CHECK(compared >= 1);
    }
}

TEST_CASE("unwritable output directory is an I/O failure naming the path") {
    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "file";
    RunConfig c;
    c.grid.nx = 11;
    c.output = (blocker / "sub").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitIo);
    CHECK(o.err.find(blocker.string()) != std::string::npos);
}

TEST_CASE("invalid assembled config gives the usage status") {
    RunConfig c;
    c.grid.nx = 1;
    c.output = scratch("usage").string();
    const RunOutput o = run_config(c);
    CHECK(o.status == kExitUsage);
    CHECK(o.err.find("Nx must be") != std::string::npos);
}

TEST_CASE("shipped configs parse and resolve") {
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(SYMHYP_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++seen;
        INFO(entry.path().string());
        const RunConfig c = parse_config(slurp(entry.path()));
        CHECK(validate_config(c).empty());
        CHECK_NOTHROW(resolve_scenario(c));
    }
    CHECK(seen >= 3);
}
