#include "output.hpp"

#include <cmath>
#include <cstdio>

namespace phononcool::cli {

namespace {

std::string json_string(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            }
            else {
                out += c;
            }
        }
    }
    return out + "\"";
}

std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

std::string csv_cell(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

std::string json_cell(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return json_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return json_string(std::get<std::string>(c));
}

std::string json_meta(const MetaValue& v)
{
    if (const auto* d = std::get_if<double>(&v)) return json_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (const auto* s = std::get_if<std::string>(&v)) return json_string(*s);
    std::string out = "[";
    const auto& list = std::get<std::vector<std::string>>(v);
    for (std::size_t i = 0; i < list.size(); ++i) {
        out += (i ? ", " : "") + json_string(list[i]);
    }
    return out + "]";
}

} // namespace

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_cell(row[i]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, std::string_view mode, const Metadata& meta, const Table& table)
{
    out << "{\n  \"mode\": " << json_string(mode) << ",\n  \"metadata\": {";
    for (std::size_t i = 0; i < meta.size(); ++i) {
        out << (i ? "," : "") << "\n    " << json_string(meta[i].first) << ": " << json_meta(meta[i].second);
    }
    out << "\n  },\n  \"data\": {";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << "\n    " << json_string(table.columns[c]) << ": [";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            out << (r ? ", " : "") << json_cell(table.rows[r][c]);
        }
        out << "]";
    }
    out << "\n  }\n}\n";
}

} // namespace phononcool::cli
