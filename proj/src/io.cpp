#include "mras/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "mras/error.hpp"

namespace mras {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field_csv(const ScalarField& f) {
  std::string s = "x,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    s += format_number(f.grid().node(i)) + "," + format_number(f[i]) + "\n";
  return s;
}

std::string snapshots_csv(const Trajectory& traj) {
  std::string s = "t";
  if (!traj.empty())
    for (std::size_t i = 0; i < traj.grid().n; ++i) s += ",x" + std::to_string(i + 1);
  s += "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    s += format_number(traj.times[k]);
    for (double v : traj.snapshots[k].values()) s += "," + format_number(v);
    s += "\n";
  }
  return s;
}

std::string table_csv(const DiagnosticTable& table, const std::vector<std::string>& columns) {
  std::vector<std::size_t> idx;
  std::string s;
  for (const auto& c : columns) {
    std::size_t j = 0;
    while (j < table.columns().size() && table.columns()[j] != c) ++j;
    if (j == table.columns().size()) throw DomainError("missing diagnostic column '" + c + "'");
    idx.push_back(j);
    s += (s.empty() ? "" : ",") + c;
  }
  s += "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + format_number(row[idx[k]]);
    s += "\n";
  }
  return s;
}

std::string series_csv(const std::vector<double>& times, const std::vector<double>& values,
                       const std::string& name) {
  if (times.size() != values.size()) throw DomainError("series length mismatch");
  std::string s = "t," + name + "\n";
  for (std::size_t k = 0; k < times.size(); ++k)
    s += format_number(times[k]) + "," + format_number(values[k]) + "\n";
  return s;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

}  // namespace mras
