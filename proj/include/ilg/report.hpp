#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ilg/driver.hpp"

namespace ilg {

struct NamedRecord {
  std::string label;
  const RunRecord* record;
};

std::string record_csv(const RunRecord& record);

/// Write atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void write_record_csv(const RunRecord& record, const std::filesystem::path& path);

/// Log-log plot of estimator (solid) and error (dashed) against element
/// count, one color per record, plus a |T|^(-1/2) reference line.
void write_convergence_svg(const std::vector<NamedRecord>& records,
                           const std::filesystem::path& path);

/// Linearization steps per level against element count (log x).
void write_iterations_svg(const std::vector<NamedRecord>& records,
                          const std::filesystem::path& path);

}  // namespace ilg
