#include "mimome/results_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mimome/config.hpp"

namespace mimome {

using nlohmann::json;

const std::vector<std::string>& csv_header() {
    static const std::vector<std::string> header = {
        "scenario",  "scheme",         "M",           "trials",   "resamples",
        "r_sum_mean", "r_sum_se",      "r_sum_noeve_mean", "r_sum_noeve_se",
        "leakage_mean", "leakage_se",  "cost_mean",   "cost_se"};
    return header;
}

std::string format_number(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite value in results");
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

namespace {

std::string scheme_label(const SweepSpec& spec) {
    std::string s(to_string(spec.scheme));
    if (spec.quant_bits) s += "_B" + std::to_string(*spec.quant_bits);
    return s;
}

json fit_json(const std::optional<FitResult>& fit) {
    if (!fit) return nullptr;
    json j = {{"model", std::string(to_string(fit->model))},
              {"level", fit->level},
              {"residual_rms", fit->residual_rms},
              {"r_squared", fit->r_squared}};
    j["slope"] = fit->slope ? json(*fit->slope) : json(nullptr);
    return j;
}

json db_list(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace

std::string csv_text(const SweepResult& result) {
    std::string out;
    const auto& header = csv_header();
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    const std::string scheme = scheme_label(result.spec);
    for (const SweepPoint& p : result.points) {
        out += result.spec.scenario + ',' + scheme + ',' + std::to_string(p.m) + ',' + std::to_string(p.trials) +
               ',' + std::to_string(p.resamples);
        for (const Estimate* e : {&p.r_sum, &p.r_sum_noeve, &p.leakage, &p.cost})
            out += ',' + format_number(e->mean) + ',' + format_number(e->se);
        out += '\n';
    }
    return out;
}

std::string manifest_text(const RunManifest& manifest, const SweepResult& result) {
    const SweepSpec& spec = manifest.spec;
    const SystemConfig& cfg = spec.base;
    json sweep = {{"scenario", spec.scenario},
                  {"K", cfg.K},
                  {"J", cfg.J},
                  {"L", cfg.L},
                  {"m_values", spec.m_values},
                  {"total_power", cfg.total_power},
                  {"sigma2", cfg.sigma2},
                  {"rho2", cfg.rho2},
                  {"beta", cfg.betas},
                  {"theta", cfg.thetas},
                  {"weights", cfg.weights},
                  {"scheme", std::string(to_string(spec.scheme))},
                  {"trials", spec.trials},
                  {"seed", spec.master_seed},
                  {"cost_estimator", std::string(to_string(spec.cost_estimator))}};
    if (spec.quant_bits) sweep["quant_bits"] = *spec.quant_bits;

    const DerivedSnr snr = derived_snr(cfg);
    json doc = {{"tool", kToolName},
                {"version", manifest.tool_version},
                {"timestamp", manifest.timestamp},
                {"master_seed", spec.master_seed},
                {"outputs", {{"csv", manifest.csv_path.string()}, {"manifest", manifest.manifest_path.string()}}},
                {"derived", {{"snr_legitimate_db", db_list(snr.legitimate_db)},
                             {"snr_eavesdropper_db", db_list(snr.eavesdropper_db)}}},
                {"sweep", sweep},
                {"se_degenerate", result.se_degenerate},
                {"fits", {{"growth", fit_json(result.growth_fit)}, {"cost", fit_json(result.cost_fit)}}}};
    return doc.dump(2) + "\n";
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".manifest.json");
    return p;
}

RunManifest emit_results(const SweepResult& result, const std::filesystem::path& csv_path) {
    RunManifest manifest;
    manifest.spec = result.spec;
    manifest.csv_path = csv_path;
    manifest.manifest_path = manifest_path_for(csv_path);
    manifest.timestamp = utc_timestamp();
    write_file(csv_path, csv_text(result));
    write_file(manifest.manifest_path, manifest_text(manifest, result));
    return manifest;
}

bool CsvTable::has_column(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IoError("CSV has no column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    for (const auto& row : rows) {
        if (idx >= row.size()) throw IoError("CSV row too short");
        const std::string& cell = row[idx];
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
            throw IoError("CSV column '" + name + "': not a number '" + cell + "'");
        out.push_back(v);
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw IoError("CSV is empty");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string rate_report_text(const RateReport& r, int m, std::uint64_t seed) {
    json doc = {{"M", m},
                {"seed", seed},
                {"sinr", r.sinr},
                {"esnr", r.esnr},
                {"r_secrecy", r.r_secrecy},
                {"r_noeve", r.r_noeve},
                {"interference", r.interference},
                {"eve_power", r.eve_power},
                {"r_sum", r.r_sum},
                {"r_sum_noeve", r.r_sum_noeve},
                {"leakage", r.leakage},
                {"cost", r.cost}};
    return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace mimome
