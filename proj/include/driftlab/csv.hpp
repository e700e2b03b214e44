#pragma once

#include <string>
#include <vector>

namespace driftlab {

/// Format a real with 17 significant digits (round-trips through text).
std::string format_g17(double value);

/// Comma-separated file with a header row; one record per data row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Write a string to a file, creating parent directories.
void write_text(const std::string& path, const std::string& content);

}  // namespace driftlab
