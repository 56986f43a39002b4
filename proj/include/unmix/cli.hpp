#pragma once

#include <string>
#include <vector>

#include "unmix/experiments.hpp"
#include "unmix/types.hpp"

namespace unmix::cli {

/// Exit status: 0 when the requested computation completed (for `certify`,
/// when the certificate is satisfiable), 1 on numerical or I/O failure
/// (for `certify`, also when unsatisfiable), 2 on usage errors.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

Beta parse_beta(const std::string& text);
std::vector<Beta> parse_beta_list(const std::string& text);
std::vector<Index> parse_index_list(const std::string& text);
GeometricGrid parse_grid(const std::string& text);

}  // namespace unmix::cli
