#pragma once

// Experiment configuration, dispatch, CSV persistence and reporting.

#include "anderson/model.hpp"
#include "anderson/msa.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace anderson {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& experiment_kinds();

struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    int workers = 1;
    std::string output;
    ModelSpec model;
    ScaleParams params;
    bool strict_params = false;
    nlohmann::json geometry = nlohmann::json::object();
    nlohmann::json options = nlohmann::json::object();

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRecord {
    std::string kind;
    std::string config_hash; // SHA-1 of the canonical config, output/workers excluded
    std::string content_id;  // git blob id of the data block
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::string> notes;
    double wall_seconds = 0.0;

    // Header line plus data rows, LF-terminated.
    std::string data_block() const;
};

// Runs the experiment; writes the CSV (and a .summary.json sidecar) when
// config.output is set.
ResultRecord run(const ExperimentConfig& config);

// Shortest round-trip decimal form; "inf", "-inf", "nan" for specials.
std::string format_double(double v);

std::string sha1_hex(const std::string& bytes);
std::string git_blob_id(const std::string& bytes);

void write_atomic(const std::filesystem::path& path, const std::string& contents);
void write_result(const std::filesystem::path& path, const ResultRecord& r);

struct ParsedResult {
    std::filesystem::path path;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string meta(const std::string& key, const std::string& fallback = "") const;
    std::vector<double> column(const std::string& name) const;
};

ParsedResult read_result(const std::filesystem::path& path);

struct ReportLine {
    std::string file;
    std::string kind;
    std::string metric;
    double value = 0.0;
    std::string criterion;
    bool pass = false;
};

// Summarizes result files and writes summary.csv plus plot-data files to
// out_dir (skipped when empty).
std::vector<ReportLine> report(const std::vector<std::filesystem::path>& files,
                               const std::filesystem::path& out_dir);

} // namespace anderson
