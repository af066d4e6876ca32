#include "perr/cohort_io.hpp"

#include <fstream>
#include <iostream>
#include <string>

#include "perr/error.hpp"

namespace perr {

namespace {

constexpr std::string_view kHeader = "id,x,y1,m2,y2";

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_binary(std::string_view field, std::size_t row, std::string_view name) {
    if (field == "0") return false;
    if (field == "1") return true;
    throw RowError(row, std::string(name) + " must be 0 or 1, got '" + std::string(field) + "'");
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

WarningSink stderr_warnings() {
    return [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
}

std::vector<IndividualRecord> parse_cohort(std::istream& in, const WarningSink& warn) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("missing header; expected " + std::string(kHeader));
    strip_cr(line);
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line != kHeader) {
        throw SchemaError("expected header '" + std::string(kHeader) + "', got '" + line + "'");
    }

    std::vector<IndividualRecord> records;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        ++row;
        const auto fields = split(line);
        if (fields.size() != 5) {
            throw RowError(row, "expected 5 fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) throw RowError(row, "id is empty");
        IndividualRecord r;
        r.x = parse_binary(fields[1], row, "x");
        r.y1 = parse_binary(fields[2], row, "y1");
        r.m2 = parse_binary(fields[3], row, "m2");
        if (fields[4].empty()) {
            if (!r.m2) throw RowError(row, "y2 is missing for a completer (m2=0)");
        } else {
            if (r.m2) throw RowError(row, "y2 is present for a non-completer (m2=1)");
            r.y2 = parse_binary(fields[4], row, "y2");
        }
        records.push_back(r);
    }
    if (records.empty() && warn) warn("cohort file has a header but no data rows");
    return records;
}

std::vector<IndividualRecord> read_cohort(const std::filesystem::path& path, const WarningSink& warn) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read cohort file " + path.string());
    return parse_cohort(in, warn);
}

void write_cohort(std::span<const IndividualRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write cohort file " + path.string());
    out << kHeader << '\n';
    std::size_t id = 0;
    for (const auto& r : records) {
        if (!r.well_formed()) throw MalformedRecord("record " + std::to_string(id + 1) + " is malformed");
        out << ++id << ',' << int{r.x} << ',' << int{r.y1} << ',' << int{r.m2} << ',';
        if (r.y2) out << int{*r.y2};
        out << '\n';
    }
    if (!out) throw IoError("failed writing cohort file " + path.string());
}

}  // namespace perr
