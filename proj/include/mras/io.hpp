#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mras/grid.hpp"
#include "mras/trajectory.hpp"

namespace mras {

/// 17 significant digits, round-trips exactly.
std::string format_number(double v);

/// Writes text with LF line endings; creates parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Rows `x,value` for the interior nodes.
std::string field_csv(const ScalarField& f);

/// One row per time: t,x1..xn.
std::string snapshots_csv(const Trajectory& traj);

/// Header row of column names, one row per step.
std::string table_csv(const DiagnosticTable& table, const std::vector<std::string>& columns);

/// Two-column series `t,value`.
std::string series_csv(const std::vector<double>& times, const std::vector<double>& values,
                       const std::string& name = "value");

/// 64-bit FNV-1a digest as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace mras
