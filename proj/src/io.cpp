#include "pbigamp/io.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace pbigamp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_csv(const Cell& c) {
  if (std::holds_alternative<std::int64_t>(c))
    return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<double>(c))
    return format_double(std::get<double>(c));
  return std::get<std::string>(c);
}

std::string cell_json(const Cell& c) {
  if (std::holds_alternative<std::int64_t>(c))
    return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return "null";
    return format_double(v);
  }
  return "\"" + std::get<std::string>(c) + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  std::string out = "[\n";
  for (size_t r = 0; r < t.rows.size(); ++r) {
    out += "  {";
    for (size_t i = 0; i < t.rows[r].size(); ++i) {
      if (i) out += ", ";
      out += "\"" + t.columns[i] + "\": " + cell_json(t.rows[r][i]);
    }
    out += r + 1 < t.rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_table(const std::string& base, const Table& t) {
  write_file(base + ".csv", to_csv(t));
  write_file(base + ".json", to_json(t));
}

void write_meta(const std::string& base, const std::string& command,
                std::uint64_t seed) {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ",
                std::gmtime(&now));
  std::string out = "{\n  \"command\": \"" + command + "\",\n  \"seed\": " +
                    std::to_string(seed) + ",\n  \"written\": \"" + stamp +
                    "\"\n}\n";
  write_file(base + ".meta.json", out);
}

}  // namespace pbigamp
