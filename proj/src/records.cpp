#include "critwin/records.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace critwin {

using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::ordered_json manifest_to_json(const ExperimentManifest& m) {
    ordered_json j;
    j["command"] = m.command;
    j["lambda"] = m.lambda;
    j["eps"] = m.eps;
    j["n"] = m.n;
    j["replications"] = m.replications;
    j["seed"] = m.seed;
    j["tolerances"] = m.tolerances;
    j["output_path"] = m.output_path;
    j["format"] = m.format;
    return j;
}

ExperimentManifest manifest_from_json(const json& j) {
    ExperimentManifest m;
    m.command = j.at("command").get<std::string>();
    m.lambda = j.at("lambda").get<double>();
    m.eps = j.at("eps").get<double>();
    m.n = j.at("n").get<std::int64_t>();
    m.replications = j.at("replications").get<std::int64_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    m.output_path = j.at("output_path").get<std::string>();
    m.format = j.at("format").get<std::string>();
    if (m.format != "csv" && m.format != "json")
        throw std::invalid_argument("manifest: format must be csv or json");
    return m;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round_to_output_precision(double v) {
    return std::strtod(format_number(v).c_str(), nullptr);
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary); // \n endings on every platform
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    return f;
}
} // namespace

std::string render_table(const ExperimentManifest& m, const Table& t) {
    if (m.format != "csv" && m.format != "json")
        throw std::invalid_argument("render_table: format must be csv or json");
    std::ostringstream f;
    if (m.format == "json") {
        ordered_json j;
        j["manifest"] = manifest_to_json(m);
        j["columns"] = t.columns;
        auto rows = json::array();
        for (const auto& r : t.rows) {
            auto row = json::array();
            for (double v : r)
                row.push_back(round_to_output_precision(v));
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        f << j.dump(1) << '\n';
        return f.str();
    }
    f << "# manifest " << manifest_to_json(m).dump() << '\n';
    for (size_t c = 0; c < t.columns.size(); ++c)
        f << (c ? "," : "") << t.columns[c];
    f << '\n';
    for (const auto& r : t.rows) {
        for (size_t c = 0; c < r.size(); ++c)
            f << (c ? "," : "") << format_number(r[c]);
        f << '\n';
    }
    return f.str();
}

void write_table(const std::string& path, const ExperimentManifest& m, const Table& t) {
    auto f = open_out(path);
    f << render_table(m, t);
}

LoadedTable read_table(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);
    LoadedTable out;
    char first = static_cast<char>(f.peek());
    if (first == '{') {
        json j = json::parse(f);
        out.manifest = manifest_from_json(j.at("manifest"));
        out.table.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& row : j.at("rows"))
            out.table.rows.push_back(row.get<std::vector<double>>());
        return out;
    }
    std::string line;
    if (!std::getline(f, line) || line.rfind("# manifest ", 0) != 0)
        throw std::runtime_error("csv missing manifest comment: " + path);
    out.manifest = manifest_from_json(json::parse(line.substr(11)));
    if (!std::getline(f, line))
        throw std::runtime_error("csv missing header: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        out.table.columns.push_back(cell);
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ','))
            row.push_back(std::strtod(cell.c_str(), nullptr));
        out.table.rows.push_back(std::move(row));
    }
    return out;
}

namespace {
ordered_json record_to_json(const SimRecord& r) {
    ordered_json j;
    j["sampler"] = r.sampler;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["lambda"] = r.lambda;
    j["eps"] = r.eps;
    j["rep"] = r.rep;
    j["z_eps"] = round_to_output_precision(r.z_eps);
    j["chi_eps"] = r.chi_eps;
    auto pts = json::array();
    for (const auto& p : r.points)
        pts.push_back(json::array({round_to_output_precision(p.x), p.label}));
    j["points"] = std::move(pts);
    return j;
}

SimRecord record_from_json(const json& j) {
    SimRecord r;
    r.sampler = j.at("sampler").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<std::int64_t>();
    r.lambda = j.at("lambda").get<double>();
    r.eps = j.at("eps").get<double>();
    r.rep = j.at("rep").get<std::int64_t>();
    r.z_eps = j.at("z_eps").get<double>();
    r.chi_eps = j.at("chi_eps").get<std::int64_t>();
    for (const auto& p : j.at("points"))
        r.points.push_back({p.at(0).get<double>(), p.at(1).get<int>()});
    return r;
}
} // namespace

void write_records(const std::string& path, const ExperimentManifest& m,
                   const std::vector<SimRecord>& records) {
    auto f = open_out(path);
    ordered_json head;
    head["manifest"] = manifest_to_json(m);
    f << head.dump() << '\n';
    for (const auto& r : records)
        f << record_to_json(r).dump() << '\n';
}

LoadedRecords read_records(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);
    LoadedRecords out;
    std::string line;
    if (!std::getline(f, line))
        throw std::runtime_error("empty record file: " + path);
    out.manifest = manifest_from_json(json::parse(line).at("manifest"));
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        out.records.push_back(record_from_json(json::parse(line)));
    }
    return out;
}

} // namespace critwin
