#include "symhyp/cli/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "symhyp/cli/catalog.hpp"

namespace symhyp::cli {

using nlohmann::json;

const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::kHypotheses: return "hypotheses";
        case Experiment::kSolve: return "solve";
        case Experiment::kCarlemanScan: return "carleman-scan";
        case Experiment::kObservability: return "observability";
        case Experiment::kEnergy: return "energy";
        case Experiment::kIdentities: return "identities";
    }
    return "?";
}

std::optional<Experiment> experiment_from_string(std::string_view name) {
    for (Experiment e : {Experiment::kHypotheses, Experiment::kSolve, Experiment::kCarlemanScan,
                         Experiment::kObservability, Experiment::kEnergy, Experiment::kIdentities}) {
        if (name == to_string(e)) return e;
    }
    return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += "\n  - " + s;
    return out;
}

// Collects problems while walking the document.
class Reader {
public:
    std::vector<std::string> problems;

    void fail(const std::string& where, const std::string& what) { problems.push_back(where + ": " + what); }

    void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
        const std::set<std::string> allowed(known.begin(), known.end());
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
        }
    }

    template <typename T>
    void get(const json& obj, const char* key, T& out, const std::string& where) {
        if (!obj.contains(key)) return;
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            fail(where + "." + key, "has the wrong type");
        }
    }

    template <typename T>
    void get(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
        if (!obj.contains(key)) return;
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            fail(where + "." + key, "has the wrong type");
        }
    }

    std::optional<Matrix> matrix(const json& j, const std::string& where) {
        if (!j.is_array() || j.empty()) {
            fail(where, "malformed matrix literal (expected a non-empty array of rows)");
            return std::nullopt;
        }
        const std::size_t rows = j.size();
        if (rows > static_cast<std::size_t>(kMaxSystemSize)) {
            fail(where, "matrix larger than " + std::to_string(kMaxSystemSize));
            return std::nullopt;
        }
        Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
        for (std::size_t r = 0; r < rows; ++r) {
            if (!j[r].is_array() || j[r].size() != rows) {
                fail(where, "malformed matrix literal (rows must have " + std::to_string(rows) + " numbers)");
                return std::nullopt;
            }
            for (std::size_t c = 0; c < rows; ++c) {
                if (!j[r][c].is_number()) {
                    fail(where, "malformed matrix literal (non-numeric entry)");
                    return std::nullopt;
                }
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
            }
        }
        return m;
    }

    std::optional<FieldSpec> field(const json& j, const std::string& where) {
        FieldSpec spec;
        if (j.is_string()) {
            spec.kind = FieldSpec::Kind::kCatalog;
            spec.catalog_id = j.get<std::string>();
            return spec;
        }
        if (!j.is_object()) {
            fail(where, "expected {\"constant\": M}, {\"affine\": {\"c0\": M, \"c1\": M}} or a catalog id");
            return std::nullopt;
        }
        reject_unknown(j, where, {"constant", "affine"});
        if (j.contains("constant")) {
            auto m = matrix(j.at("constant"), where + ".constant");
            if (!m) return std::nullopt;
            spec.kind = FieldSpec::Kind::kConstant;
            spec.c0 = *m;
            return spec;
        }
        if (j.contains("affine")) {
            const json& a = j.at("affine");
            if (!a.is_object() || !a.contains("c0") || !a.contains("c1")) {
                fail(where + ".affine", "needs c0 and c1");
                return std::nullopt;
            }
            auto c0 = matrix(a.at("c0"), where + ".affine.c0");
            auto c1 = matrix(a.at("c1"), where + ".affine.c1");
            if (!c0 || !c1) return std::nullopt;
            if (c0->rows() != c1->rows()) {
                fail(where + ".affine", "c0 and c1 differ in size");
                return std::nullopt;
            }
            spec.kind = FieldSpec::Kind::kAffine;
            spec.c0 = *c0;
            spec.c1 = *c1;
            return spec;
        }
        fail(where, "empty field definition");
        return std::nullopt;
    }
};

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json field_json(const FieldSpec& f) {
    switch (f.kind) {
        case FieldSpec::Kind::kConstant: return {{"constant", matrix_json(f.c0)}};
        case FieldSpec::Kind::kAffine: return {{"affine", {{"c0", matrix_json(f.c0)}, {"c1", matrix_json(f.c1)}}}};
        case FieldSpec::Kind::kCatalog: return f.catalog_id;
    }
    return nullptr;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error("invalid config:" + join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validate_config(const RunConfig& c) {
    std::vector<std::string> p;
    if (!c.inline_scenario && !find_catalog_entry(c.scenario)) p.push_back("scenario: unknown scenario '" + c.scenario + "'");
    if (c.grid.nx < 3) p.push_back("grid.nx: Nx must be ≥ 3");
    if (c.grid.nt && *c.grid.nt < 2) p.push_back("grid.nt: Nt must be ≥ 2");
    if (!(c.grid.x_hi > c.grid.x_lo)) p.push_back("grid: x_hi must exceed x_lo");
    if (c.grid.T && !(*c.grid.T > 0.0)) p.push_back("grid.T: T must be > 0");
    if (!(c.grid.cfl > 0.0)) p.push_back("grid.cfl: must be > 0");
    if (c.weight.beta && !(*c.weight.beta > 0.0)) p.push_back("weight.beta: beta must be > 0");
    if (c.s_grid.empty()) p.push_back("s_grid: must not be empty");
    for (double s : c.s_grid) {
        if (!(s > 0.0)) {
            p.push_back("s_grid: values must be > 0");
            break;
        }
    }
    if (c.ensemble < 1) p.push_back("ensemble: must be >= 1");
    if (c.modes < 1) p.push_back("modes: must be >= 1");
    if (!std::isfinite(c.decay) || !std::isfinite(c.initial.decay)) p.push_back("decay: must be finite");
    if (c.initial.modes < 1) p.push_back("initial.modes: must be >= 1");
    if (c.initial.kind == InitialConfig::Kind::kBump && !(c.initial.hi > c.initial.lo)) {
        p.push_back("initial: bump support must satisfy lo < hi");
    }
    if (c.output.empty()) p.push_back("output: must not be empty");
    if (c.inline_scenario) {
        const InlineScenario& s = *c.inline_scenario;
        if (s.n < 1 || s.n > kMaxSystemSize) p.push_back("scenario.n: out of range");
        auto check_field = [&](const FieldSpec& f, const char* name, bool symmetric) {
            const std::string where = std::string("scenario.") + name;
            if (f.kind == FieldSpec::Kind::kCatalog) {
                if (!catalog_field(f.catalog_id)) p.push_back(where + ": unknown catalog field '" + f.catalog_id + "'");
                return;
            }
            if (f.c0.rows() != s.n) p.push_back(where + ": matrix size does not match n");
            if (symmetric && (symmetry_defect(f.c0) > kSymmetryTolerance ||
                              (f.kind == FieldSpec::Kind::kAffine && symmetry_defect(f.c1) > kSymmetryTolerance))) {
                p.push_back(where + ": matrix must be symmetric");
            }
        };
        check_field(s.h0, "h0", true);
        check_field(s.h1, "h1", true);
        if (s.p) check_field(*s.p, "p", false);
    }
    return p;
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("document: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"document: top level must be an object"});

    Reader rd;
    RunConfig cfg;
    rd.reject_unknown(doc, "config",
                      {"experiment", "scenario", "grid", "weight", "s_grid", "ensemble", "seed", "modes", "decay",
                       "refine", "initial", "output"});

    if (doc.contains("experiment")) {
        const json& e = doc.at("experiment");
        const auto kind = e.is_string() ? experiment_from_string(e.get<std::string>()) : std::nullopt;
        if (kind) {
            cfg.experiment = *kind;
        } else {
            rd.fail("experiment", "unknown experiment kind");
        }
    }

    if (doc.contains("scenario")) {
        const json& s = doc.at("scenario");
        if (s.is_string()) {
            cfg.scenario = s.get<std::string>();
        } else if (s.is_object()) {
            rd.reject_unknown(s, "scenario", {"name", "n", "h0", "h1", "p"});
            InlineScenario inl;
            rd.get(s, "name", inl.name, "scenario");
            rd.get(s, "n", inl.n, "scenario");
            for (const char* key : {"h0", "h1"}) {
                if (!s.contains(key)) {
                    rd.fail(std::string("scenario.") + key, "is required for an inline scenario");
                    continue;
                }
                if (auto f = rd.field(s.at(key), std::string("scenario.") + key)) {
                    (std::string(key) == "h0" ? inl.h0 : inl.h1) = *f;
                }
            }
            if (s.contains("p")) inl.p = rd.field(s.at("p"), "scenario.p");
            cfg.scenario = inl.name;
            cfg.inline_scenario = std::move(inl);
        } else {
            rd.fail("scenario", "must be a catalog name or an inline definition");
        }
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        if (g.is_object()) {
            rd.reject_unknown(g, "grid", {"x_lo", "x_hi", "T", "nx", "nt", "cfl"});
            rd.get(g, "x_lo", cfg.grid.x_lo, "grid");
            rd.get(g, "x_hi", cfg.grid.x_hi, "grid");
            rd.get(g, "T", cfg.grid.T, "grid");
            rd.get(g, "nx", cfg.grid.nx, "grid");
            if (g.contains("nt") && !(g.at("nt").is_string() && g.at("nt").get<std::string>() == "cfl")) {
                rd.get(g, "nt", cfg.grid.nt, "grid");
            }
            rd.get(g, "cfl", cfg.grid.cfl, "grid");
        } else {
            rd.fail("grid", "must be an object");
        }
    }

    if (doc.contains("weight")) {
        const json& w = doc.at("weight");
        if (w.is_object()) {
            rd.reject_unknown(w, "weight", {"eta", "beta"});
            if (w.contains("eta")) {
                const json& eta = w.at("eta");
                if (eta.is_object()) {
                    rd.reject_unknown(eta, "weight.eta", {"linear"});
                    if (eta.contains("linear") && eta.at("linear").is_object()) {
                        rd.reject_unknown(eta.at("linear"), "weight.eta.linear", {"a", "b"});
                        rd.get(eta.at("linear"), "a", cfg.weight.a, "weight.eta.linear");
                        rd.get(eta.at("linear"), "b", cfg.weight.b, "weight.eta.linear");
                    } else {
                        rd.fail("weight.eta", "expected {\"linear\": {\"a\": .., \"b\": ..}}");
                    }
                } else {
                    rd.fail("weight.eta", "must be an object");
                }
            }
            if (w.contains("beta")) {
                const json& b = w.at("beta");
                if (b.is_string() && b.get<std::string>() == "auto") {
                    cfg.weight.beta_auto = true;
                } else if (b.is_number()) {
                    cfg.weight.beta = b.get<double>();
                } else {
                    rd.fail("weight.beta", "must be a number or \"auto\"");
                }
            }
        } else {
            rd.fail("weight", "must be an object");
        }
    }

    rd.get(doc, "s_grid", cfg.s_grid, "config");
    rd.get(doc, "ensemble", cfg.ensemble, "config");
    rd.get(doc, "seed", cfg.seed, "config");
    rd.get(doc, "modes", cfg.modes, "config");
    rd.get(doc, "decay", cfg.decay, "config");
    rd.get(doc, "refine", cfg.refine, "config");
    rd.get(doc, "output", cfg.output, "config");

    if (doc.contains("initial")) {
        const json& in = doc.at("initial");
        if (in.is_object()) {
            rd.reject_unknown(in, "initial", {"kind", "modes", "decay", "support"});
            std::string kind = "band-limited";
            rd.get(in, "kind", kind, "initial");
            if (kind == "band-limited") {
                cfg.initial.kind = InitialConfig::Kind::kBandLimited;
            } else if (kind == "bump") {
                cfg.initial.kind = InitialConfig::Kind::kBump;
            } else {
                rd.fail("initial.kind", "must be \"band-limited\" or \"bump\"");
            }
            rd.get(in, "modes", cfg.initial.modes, "initial");
            rd.get(in, "decay", cfg.initial.decay, "initial");
            if (in.contains("support")) {
                const json& sup = in.at("support");
                if (sup.is_array() && sup.size() == 2 && sup[0].is_number() && sup[1].is_number()) {
                    cfg.initial.lo = sup[0].get<double>();
                    cfg.initial.hi = sup[1].get<double>();
                } else {
                    rd.fail("initial.support", "must be [lo, hi]");
                }
            }
        } else {
            rd.fail("initial", "must be an object");
        }
    }

    for (auto& p : validate_config(cfg)) rd.problems.push_back(std::move(p));
    if (!rd.problems.empty()) throw ConfigError(std::move(rd.problems));
    return cfg;
}

std::string serialize_config(const RunConfig& c) {
    json doc;
    doc["experiment"] = to_string(c.experiment);
    if (c.inline_scenario) {
        const InlineScenario& s = *c.inline_scenario;
        json sj = {{"name", s.name}, {"n", s.n}, {"h0", field_json(s.h0)}, {"h1", field_json(s.h1)}};
        if (s.p) sj["p"] = field_json(*s.p);
        doc["scenario"] = sj;
    } else {
        doc["scenario"] = c.scenario;
    }
    json g = {{"x_lo", c.grid.x_lo}, {"x_hi", c.grid.x_hi}, {"nx", c.grid.nx}, {"cfl", c.grid.cfl}};
    if (c.grid.T) g["T"] = *c.grid.T;
    g["nt"] = c.grid.nt ? json(*c.grid.nt) : json("cfl");
    doc["grid"] = g;
    json w = {{"eta", {{"linear", {{"a", c.weight.a}, {"b", c.weight.b}}}}}};
    if (c.weight.beta_auto) {
        w["beta"] = "auto";
    } else if (c.weight.beta) {
        w["beta"] = *c.weight.beta;
    }
    doc["weight"] = w;
    doc["s_grid"] = c.s_grid;
    doc["ensemble"] = c.ensemble;
    doc["seed"] = c.seed;
    doc["modes"] = c.modes;
    doc["decay"] = c.decay;
    doc["refine"] = c.refine;
    doc["initial"] = {{"kind", c.initial.kind == InitialConfig::Kind::kBump ? "bump" : "band-limited"},
                      {"modes", c.initial.modes},
                      {"decay", c.initial.decay},
                      {"support", {c.initial.lo, c.initial.hi}}};
    doc["output"] = c.output;
    return doc.dump(2) + "\n";
}

}  // namespace symhyp::cli
