#pragma once
// File formats: every output embeds the manifest that produced it, so any
// result can be traced and re-run.  CSV carries the manifest as a leading
// "# manifest {...}" comment, JSON tables as a "manifest" field, JSON-lines
// record streams as their first line.
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "critwin/points.hpp"

namespace critwin {

struct ExperimentManifest {
    std::string command;
    double lambda = 0.0;
    double eps = 0.0;
    std::int64_t n = 0;
    std::int64_t replications = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;
    std::string output_path;
    std::string format = "csv"; // csv | json
};

nlohmann::ordered_json manifest_to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const nlohmann::json& j);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// 12 significant digits, the precision every numeric output column carries
std::string format_number(double v);
double round_to_output_precision(double v); // v as reparsed from format_number

std::string render_table(const ExperimentManifest& m, const Table& t);
void write_table(const std::string& path, const ExperimentManifest& m, const Table& t);

struct LoadedTable {
    ExperimentManifest manifest;
    Table table;
};
LoadedTable read_table(const std::string& path); // sniffs csv vs json

struct SimRecord {
    std::string sampler; // "graph" | "bm"
    std::uint64_t seed = 0;
    std::int64_t n = 0; // 0 for bm
    double lambda = 0.0;
    double eps = 0.0;
    std::int64_t rep = 0;
    double z_eps = 0.0;
    std::int64_t chi_eps = 0;
    PointSample points;
};

void write_records(const std::string& path, const ExperimentManifest& m,
                   const std::vector<SimRecord>& records);

struct LoadedRecords {
    ExperimentManifest manifest;
    std::vector<SimRecord> records;
};
LoadedRecords read_records(const std::string& path);

} // namespace critwin
