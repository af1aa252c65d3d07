// output.hpp - byte-stable CSV and JSON writers

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace phononcool::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

using MetaValue = std::variant<double, std::int64_t, bool, std::string, std::vector<std::string>>;
using Metadata = std::vector<std::pair<std::string, MetaValue>>;

// 17 significant digits, "%.17g".
std::string format_double(double x);

void write_csv(std::ostream& out, const Table& table);

// {"mode": ..., "metadata": {...}, "data": {column: [values...]}}
void write_json(std::ostream& out, std::string_view mode, const Metadata& meta, const Table& table);

} // namespace phononcool::cli
