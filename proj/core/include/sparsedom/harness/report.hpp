#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparsedom/harness/experiment.hpp"

namespace sparsedom::harness {

/// Version tag written as the first line of every sweep CSV.
inline constexpr const char* kCsvSchema = "# sparsedom-sweep v1";

std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> rows_from_csv(const std::string& text);

/// Plain-text summary: one `key = value` line per summary entry, then notes.
std::string summary_text(const RunReport& r);

/// JSON object with the summary, notes and row count.
std::string summary_json(const RunReport& r);

/// Writes `<name>.csv`, `<name>_summary.txt`, `<name>_summary.json` and one
/// `<name>_<doc>.json` per document into `dir`. Returns the written paths.
std::vector<std::filesystem::path> write_report(const RunReport& r, const std::filesystem::path& dir);

}  // namespace sparsedom::harness
