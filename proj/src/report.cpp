#include "wkbq/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "wkbq/errors.hpp"

namespace wkbq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string cell_text(const Cell& c) {
    return std::visit(overloaded{[](std::monostate) { return std::string(); },
                                 [](std::int64_t v) { return std::to_string(v); },
                                 [](double v) { return format_number(v); },
                                 [](const std::string& s) { return s; }},
                      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    return std::visit(overloaded{[](std::monostate) { return nlohmann::ordered_json(nullptr); },
                                 [](std::int64_t v) { return nlohmann::ordered_json(v); },
                                 [](double v) {
                                     const std::string s = format_number(v);
                                     if (!std::isfinite(v)) return nlohmann::ordered_json(s);
                                     return nlohmann::ordered_json(std::strtod(s.c_str(), nullptr));
                                 },
                                 [](const std::string& s) { return nlohmann::ordered_json(s); }},
                      c);
}

void put_csv_field(std::ostream& out, const std::string& s) {
    const bool quote = s.find_first_of(",\"\r\n") != std::string::npos ||
                       (!s.empty() && (s.front() == ' ' || s.back() == ' '));
    if (!quote) {
        out << s;
        return;
    }
    out << '"';
    for (char ch : s) {
        if (ch == '"') out << '"';
        out << ch;
    }
    out << '"';
}

Cell infer(const std::string& s) {
    if (s.empty()) return std::monostate{};
    std::int64_t i = 0;
    const char* end = s.data() + s.size();
    if (auto [p, ec] = std::from_chars(s.data(), end, i); ec == std::errc() && p == end) return i;
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(s.data(), end, d); ec == std::errc() && p == end && std::isfinite(d)) return d;
    return s;
}

std::vector<std::vector<std::string>> split_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field.empty()) throw ReportError("stray quote inside an unquoted CSV field");
                quoted = true;
                any = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                record.push_back(std::move(field));
                field.clear();
                records.push_back(std::move(record));
                record.clear();
                any = false;
                break;
            default:
                field += ch;
                any = true;
        }
    }
    if (quoted) throw ReportError("unterminated quoted CSV field");
    if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace

Cell cell(std::optional<double> v) {
    if (!v) return std::monostate{};
    return *v;
}

void Report::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ReportError("row width does not match the column count");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const Report& report, std::ostream& out) {
    bool first = true;
    const auto sep = [&] {
        if (!first) out << ',';
        first = false;
    };
    for (const auto& [name, value] : report.fields) {
        sep();
        put_csv_field(out, name);
    }
    for (const auto& c : report.columns) {
        sep();
        put_csv_field(out, c);
    }
    out << '\n';
    for (const auto& row : report.rows) {
        first = true;
        for (const auto& [name, value] : report.fields) {
            sep();
            put_csv_field(out, cell_text(value));
        }
        for (const auto& c : row) {
            sep();
            put_csv_field(out, cell_text(c));
        }
        out << '\n';
    }
}

nlohmann::ordered_json to_json(const Report& report) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [name, value] : report.fields) doc[name] = cell_json(value);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[report.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

void write_json(const Report& report, std::ostream& out) { out << to_json(report).dump(2) << '\n'; }

Report parse_csv(std::string_view text, std::span<const std::string> field_names) {
    auto records = split_records(text);
    if (records.empty()) throw ReportError("CSV has no header");
    const auto& header = records.front();
    if (header.size() < field_names.size()) throw ReportError("CSV header is narrower than the field list");
    for (std::size_t i = 0; i < field_names.size(); ++i)
        if (header[i] != field_names[i]) throw ReportError("CSV header field '" + header[i] + "' is unexpected");

    Report r;
    r.columns.assign(header.begin() + static_cast<std::ptrdiff_t>(field_names.size()), header.end());
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& rec = records[k];
        if (rec.size() != header.size())
            throw ReportError("CSV record " + std::to_string(k) + " has " + std::to_string(rec.size()) +
                              " fields, header has " + std::to_string(header.size()));
        if (k == 1)
            for (std::size_t i = 0; i < field_names.size(); ++i) r.fields.emplace_back(field_names[i], infer(rec[i]));
        std::vector<Cell> row;
        for (std::size_t i = field_names.size(); i < rec.size(); ++i) row.push_back(infer(rec[i]));
        r.rows.push_back(std::move(row));
    }
    if (r.fields.empty())
        for (const auto& name : field_names) r.fields.emplace_back(name, std::monostate{});
    return r;
}

}  // namespace wkbq
