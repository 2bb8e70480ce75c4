#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "zerocorr/covariance.hpp"

namespace zerocorr {

/// One point per line, m "re,im" tokens separated by whitespace. '#' starts
/// a comment line; blank lines separate configurations.
std::vector<PointConfiguration> read_points(std::istream& is);
std::vector<PointConfiguration> read_points_file(const std::string& path);

/// Flat key=value lines; '#' comments and blank lines are skipped.
std::vector<std::pair<std::string, std::string>> read_config(std::istream& is);
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace zerocorr
