#include "perr/results_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <tuple>

#include <fmt/format.h>

#include "perr/error.hpp"

namespace perr {

namespace {

std::string real(std::optional<double> v) { return v ? fmt::format("{:.6g}", *v) : "NA"; }

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_real(const std::string& s, std::size_t row, const char* name) {
    if (s == "NA") return std::nullopt;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw RowError(row, std::string("bad ") + name + " '" + s + "'");
    }
    return v;
}

std::uint64_t parse_count(const std::string& s, std::size_t row, const char* name) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw RowError(row, std::string("bad ") + name + " '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_results(std::span<const SummaryRow> rows) {
    std::vector<SummaryRow> sorted(rows.begin(), rows.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.scenario_id, a.dropout_target, a.estimator) <
               std::tie(b.scenario_id, b.dropout_target, b.estimator);
    });
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto& r : sorted) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.scenario_id,
                           real(r.dropout_target), estimator_name(r.estimator), real(r.mean),
                           real(r.p2_5), real(r.p97_5), r.n_used, r.n_failed, real(r.oracle));
    }
    return out;
}

void write_results(std::span<const SummaryRow> rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write results file " + path.string());
    out << format_results(rows);
    if (!out) throw IoError("failed writing results file " + path.string());
}

std::vector<SummaryRow> parse_results(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader) {
        throw SchemaError("expected results header '" + std::string(kResultsHeader) + "'");
    }
    std::vector<SummaryRow> rows;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        const auto f = split(line);
        if (f.size() != 9) throw RowError(row, "expected 9 fields");
        SummaryRow r;
        r.scenario_id = static_cast<int>(parse_count(f[0], row, "scenario"));
        const auto dropout = parse_real(f[1], row, "dropout_target");
        if (!dropout) throw RowError(row, "dropout_target is NA");
        r.dropout_target = *dropout;
        const auto e = parse_estimator(f[2]);
        if (!e) throw RowError(row, "unknown estimator '" + f[2] + "'");
        r.estimator = *e;
        r.mean = parse_real(f[3], row, "mean");
        r.p2_5 = parse_real(f[4], row, "p2_5");
        r.p97_5 = parse_real(f[5], row, "p97_5");
        r.n_used = parse_count(f[6], row, "n_used");
        r.n_failed = parse_count(f[7], row, "n_failed");
        r.oracle = parse_real(f[8], row, "oracle");
        rows.push_back(r);
    }
    return rows;
}

std::vector<SummaryRow> read_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read results file " + path.string());
    return parse_results(in);
}

}  // namespace perr
