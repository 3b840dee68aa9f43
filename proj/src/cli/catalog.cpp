#include "symhyp/cli/catalog.hpp"

#include <ostream>

#include "symhyp/csv.hpp"
#include "symhyp/hypotheses.hpp"

namespace symhyp::cli {

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Matrix scalar(double v) {
    Matrix m(1, 1);
    m << v;
    return m;
}

std::vector<CatalogEntry> make_catalog() {
    std::vector<CatalogEntry> c;
    c.push_back({"transport", "H0 = H1 = 1 (scalar transport at unit speed)", 1,
                 constant_field(scalar(1.0), "1"), constant_field(scalar(1.0), "1"), zero_field(1), 2.0, 0.75});
    const Matrix spd = mat2(2, 1, 1, 2);
    c.push_back({"coupled-spd", "H0 = H1 = [[2,1],[1,2]]", 2, constant_field(spd, "[[2,1],[1,2]]"),
                 constant_field(spd, "[[2,1],[1,2]]"), zero_field(2), 2.0, 0.5});
    c.push_back({"coupled-varying", "H0 = I, H1 = [[2+x,1],[1,2]]", 2,
                 constant_field(Matrix::Identity(2, 2), "I"),
                 affine_x_field(spd, mat2(1, 0, 0, 0), "[[2+x,1],[1,2]]"), zero_field(2), 2.0, 0.5});
    c.push_back({"wave-type", "H0 = I, H1 = [[0,1],[1,0]] (indefinite; weight hypotheses fail)", 2,
                 constant_field(Matrix::Identity(2, 2), "I"), constant_field(mat2(0, 1, 1, 0), "[[0,1],[1,0]]"),
                 zero_field(2), 2.0, 0.5});
    return c;
}

}  // namespace

Scenario CatalogEntry::build(const SpaceTimeGrid& grid, const Weight& weight) const {
    return Scenario{name, grid, n, h0, h1, p, VectorField::zero(n), weight};
}

Scenario CatalogEntry::build_default(int nx, int nt) const {
    return build(SpaceTimeGrid(0.0, 1.0, default_T, nx, nt), Weight::linear(1.0, 0.0, default_beta));
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = make_catalog();
    return entries;
}

const CatalogEntry* find_catalog_entry(std::string_view name) {
    for (const auto& e : catalog()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::optional<MatrixField> catalog_field(std::string_view id) {
    const auto colon = id.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const CatalogEntry* e = find_catalog_entry(id.substr(0, colon));
    if (!e) return std::nullopt;
    const auto which = id.substr(colon + 1);
    if (which == "h0") return e->h0;
    if (which == "h1") return e->h1;
    if (which == "p") return e->p;
    return std::nullopt;
}

void list_scenarios(std::ostream& os) {
    for (const auto& e : catalog()) {
        const Scenario s = e.build_default(11, 3);
        const HypothesisReport r = check_hypotheses(s);
        os << e.name << "  N=" << e.n << "  " << e.description << "\n    T=" << csv::format(e.default_T)
           << " beta=" << csv::format(e.default_beta) << " eta=x  ";
        std::vector<std::string> failed;
        if (!r.weight_positivity.passed) failed.emplace_back(hypothesis::kWeightPositivity);
        if (!r.eta_gradient.passed) failed.emplace_back(hypothesis::kEtaGradient);
        if (!r.h0_bounds.passed) failed.emplace_back(hypothesis::kH0Bounds);
        if (failed.empty()) {
            os << "OK delta=" << csv::format(r.weight_positivity.bound) << " delta0=" << csv::format(r.eta_gradient.bound)
               << " delta1=" << csv::format(r.h0_bounds.delta1) << " M=" << csv::format(r.h0_bounds.M)
               << " T_min=" << csv::format(*r.T_min);
        } else {
            for (std::size_t k = 0; k < failed.size(); ++k) os << (k ? " " : "") << "FAILS-" << failed[k];
            os << " (delta=" << csv::format(r.weight_positivity.bound)
               << " delta0=" << csv::format(r.eta_gradient.bound) << ")";
        }
        os << "\n";
    }
}

}  // namespace symhyp::cli
