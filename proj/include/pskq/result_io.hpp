#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pskq/curve.hpp"
#include "pskq/errors.hpp"

namespace pskq {

enum class FileFormat { csv, json };

inline FileFormat parse_format(const std::string& name) {
    if (name == "csv") return FileFormat::csv;
    if (name == "json") return FileFormat::json;
    throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

/// One self-describing output record; the schema is shared by every command
/// that emits SEP-like values.
struct ResultRow {
    int M = 0;
    int n = 0;
    double m = 0.0;
    double snr_db = 0.0;
    double value = 0.0;
    double uncertainty = 0.0;
    std::string method;
    std::uint64_t seed = 0;

    bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* result_csv_header = "M,n,m,snr_db,value,uncertainty,method,seed";

namespace detail {

// Shortest exactly-round-tripping decimal form.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("trailing characters in number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError("cannot parse number '" + s + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("number out of range '" + s + "'");
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace detail

inline void write_result_rows(const std::filesystem::path& path,
                              const std::vector<ResultRow>& rows, FileFormat format) {
    for (const auto& row : rows)
        if (row.method.find(',') != std::string::npos ||
            row.method.find('\n') != std::string::npos)
            throw ConfigError("method tag must not contain commas or newlines");

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path.string());

    if (format == FileFormat::csv) {
        out << result_csv_header << '\n';
        for (const auto& r : rows) {
            out << r.M << ',' << r.n << ',' << detail::format_double(r.m) << ','
                << detail::format_double(r.snr_db) << ',' << detail::format_double(r.value)
                << ',' << detail::format_double(r.uncertainty) << ',' << r.method << ','
                << r.seed << '\n';
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"M", r.M},
                           {"n", r.n},
                           {"m", r.m},
                           {"snr_db", r.snr_db},
                           {"value", r.value},
                           {"uncertainty", r.uncertainty},
                           {"method", r.method},
                           {"seed", r.seed}});
        }
        out << arr.dump(2) << '\n';
    }
    if (!out) throw ConfigError("failed writing " + path.string());
}

/// Reload rows from a CSV or JSON result file (format sniffed from content).
inline std::vector<ResultRow> read_result_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<ResultRow> rows;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ConfigError("empty result file " + path.string());

    if (text[first] == '[') {
        const nlohmann::json arr = nlohmann::json::parse(text);
        for (const auto& item : arr) {
            ResultRow r;
            r.M = item.at("M").get<int>();
            r.n = item.at("n").get<int>();
            r.m = item.at("m").get<double>();
            r.snr_db = item.at("snr_db").get<double>();
            r.value = item.at("value").get<double>();
            r.uncertainty = item.at("uncertainty").get<double>();
            r.method = item.at("method").get<std::string>();
            r.seed = item.at("seed").get<std::uint64_t>();
            rows.push_back(std::move(r));
        }
        return rows;
    }

    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line) || detail::split_csv_line(line) !=
                                          detail::split_csv_line(result_csv_header))
        throw ConfigError("bad CSV header in " + path.string());
    while (std::getline(lines, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 8) throw ConfigError("bad CSV row in " + path.string() + ": " + line);
        ResultRow r;
        r.M = static_cast<int>(detail::parse_double(f[0]));
        r.n = static_cast<int>(detail::parse_double(f[1]));
        r.m = detail::parse_double(f[2]);
        r.snr_db = detail::parse_double(f[3]);
        r.value = detail::parse_double(f[4]);
        r.uncertainty = detail::parse_double(f[5]);
        r.method = f[6];
        r.seed = static_cast<std::uint64_t>(std::stoull(f[7]));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<ResultRow> curve_to_rows(const SepCurve& curve, int M, int n, double m,
                                            std::uint64_t seed) {
    std::vector<ResultRow> rows;
    rows.reserve(curve.size());
    for (const auto& pt : curve)
        rows.push_back(ResultRow{M, n, m, pt.snr_db, pt.value, pt.uncertainty, pt.method, seed});
    return rows;
}

/// Rebuild a curve from rows. The CSV schema does not carry trial counts, so
/// reloaded points have trials = 0.
inline SepCurve rows_to_curve(const std::vector<ResultRow>& rows) {
    SepCurve curve;
    curve.reserve(rows.size());
    for (const auto& r : rows)
        curve.push_back(SepPoint{r.snr_db, r.value, r.uncertainty, r.method, 0});
    return curve;
}

/// Guard the write-once policy: refuse to clobber an existing file unless
/// overwrite was requested.
inline void ensure_writable(const std::filesystem::path& path, bool overwrite) {
    if (!overwrite && std::filesystem::exists(path))
        throw ConfigError("output file " + path.string() +
                          " already exists (pass --overwrite to replace it)");
}

} // namespace pskq
