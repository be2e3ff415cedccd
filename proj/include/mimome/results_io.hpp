#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mimome/harness.hpp"

namespace mimome {

inline constexpr const char* kToolName = "mimome-sim";
inline constexpr const char* kToolVersion = "1.0.0";

/// Column order of the sweep CSV.
const std::vector<std::string>& csv_header();

/// Nine significant digits, '.' decimal point, independent of locale.
std::string format_number(double v);

/// Header plus one row per array size.
std::string csv_text(const SweepResult& result);

/// Everything needed to reproduce a CSV: the resolved sweep, derived SNRs,
/// fits, output paths, version and a UTC timestamp.
struct RunManifest {
    SweepSpec spec;
    std::filesystem::path csv_path;
    std::filesystem::path manifest_path;
    std::string tool_version = kToolVersion;
    std::string timestamp;  // ISO-8601 UTC
};

std::string manifest_text(const RunManifest& manifest, const SweepResult& result);

/// "<stem>.manifest.json" next to the CSV.
std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

/// Writes the CSV and its manifest. Throws IoError naming the path.
RunManifest emit_results(const SweepResult& result, const std::filesystem::path& csv_path);

/// Minimal reader for CSVs written by emit_results (no quoting).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::vector<double> numeric_column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

/// One RateReport as a JSON document.
std::string rate_report_text(const RateReport& report, int m, std::uint64_t seed);

std::string utc_timestamp();

} // namespace mimome
