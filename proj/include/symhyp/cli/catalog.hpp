#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symhyp/scenario.hpp"

namespace symhyp::cli {

/// Builtin coefficient sets on (0, 1) with eta(x) = x.
struct CatalogEntry {
    std::string name;
    std::string description;
    int n;
    MatrixField h0;
    MatrixField h1;
    MatrixField p;
    double default_T;
    double default_beta;

    Scenario build(const SpaceTimeGrid& grid, const Weight& weight) const;
    /// Default grid (0,1) x (0, default_T) with the given node counts and
    /// weight eta = x, beta = default_beta.
    Scenario build_default(int nx, int nt) const;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry* find_catalog_entry(std::string_view name);

/// "<scenario>:<h0|h1|p>" to the corresponding field.
std::optional<MatrixField> catalog_field(std::string_view id);

/// Prints one line per entry with its hypothesis status on the default grid.
void list_scenarios(std::ostream& os);

}  // namespace symhyp::cli
