#pragma once

#include <string>
#include <string_view>

#include "projangles/groups.hpp"

namespace pa {

// Text formats (locale independent, parse errors name source, line and
// expectation):
//   matrix:     "rows cols" then rows of whitespace-separated decimals
//   projection: one header line "p=<value>" then a matrix block
//   family:     header "n p", then labelled matrix blocks; each label line is
//               either "TOP" or the sorted vertex list of a codimension-1
//               face ("0 1"), followed by that projection's matrix
//   graph:      "parts a b" then lines "u v" (0-based, u in part 1)
//   group:      "table" / <order> / <order> rows of indices, or
//               "perm" / <degree> / one generator per line in cycle notation
//   subgroup:   whitespace-separated element indices

Matrix parse_matrix_text(std::string_view text, const std::string& source);
std::string matrix_to_text(const Matrix& m);

Projection parse_projection_text(std::string_view text, const std::string& source);
std::string projection_to_text(const Projection& p);

SimplexFamily parse_family_text(std::string_view text, const std::string& source);
std::string family_to_text(const SimplexFamily& f);

BipartiteGraph parse_graph_text(std::string_view text, const std::string& source);
std::string graph_to_text(const BipartiteGraph& g);

FiniteGroup parse_group_text(std::string_view text, const std::string& source);
std::string group_to_table_text(const FiniteGroup& g);

Subgroup parse_subgroup_text(std::string_view text, const std::string& source,
                             const FiniteGroup& g);

double parse_p_value(std::string_view token, const std::string& where);
std::string p_value_to_text(double p);

std::string read_file(const std::string& path);
// Write-then-rename so report consumers never observe partial files.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace pa
