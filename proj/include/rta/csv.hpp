#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rta/mesh.hpp"

namespace rta {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Parses a full string as a double; throws ParseError otherwise.
double parse_double(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// `j,x_center,value` rows (1-based j) preceded by `# ` comment lines and a header.
std::string cell_field_csv(const CellField& field, const std::vector<std::string>& comments = {});

}  // namespace rta
