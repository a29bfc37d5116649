#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mras/grid.hpp"

namespace mras {

/// Row-major table of named per-step scalars.
class DiagnosticTable {
 public:
  DiagnosticTable() = default;
  explicit DiagnosticTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return data_.size(); }
  void add_row(std::vector<double> row);
  const std::vector<double>& row(std::size_t i) const { return data_[i]; }

  bool has_column(const std::string& name) const;
  /// Throws DomainError naming the column when missing.
  std::vector<double> column(const std::string& name) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> data_;
};

/// Time-indexed field snapshots on a uniform time grid starting at 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<ScalarField> snapshots;
  DiagnosticTable diagnostics;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  double dt() const;
  const Grid& grid() const { return snapshots.front().grid(); }
  void push_back(double t, ScalarField f);
};

/// times[k] = k * dt for k = 0..steps.
std::vector<double> uniform_times(double dt, std::size_t steps);

/// Number of steps of size dt needed to reach T (rounded to nearest).
std::size_t step_count(double T, double dt);

}  // namespace mras
