#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace drsm {

// Renders one semilog curve per CSV (legend from file stems) into a
// self-contained SVG. Throws ConfigError for an unknown column or a CSV
// without data rows.
void emit_plot(const std::vector<std::filesystem::path>& csvs,
               const std::string& column, const std::filesystem::path& out);

}  // namespace drsm
