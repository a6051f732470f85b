#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace pbigamp {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// shortest round-trip representation; identical bytes across runs
std::string format_double(double v);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

void write_file(const std::string& path, const std::string& content);

// writes <base>.csv and <base>.json
void write_table(const std::string& base, const Table& t);

// volatile run info (timestamps live here, never in the data files)
void write_meta(const std::string& base, const std::string& command,
                std::uint64_t seed);

}  // namespace pbigamp
