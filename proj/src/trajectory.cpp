#include "mras/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "mras/error.hpp"

namespace mras {

DiagnosticTable::DiagnosticTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void DiagnosticTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) throw DomainError("diagnostic row has wrong width");
  data_.push_back(std::move(row));
}

bool DiagnosticTable::has_column(const std::string& name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::vector<double> DiagnosticTable::column(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw DomainError("missing diagnostic column '" + name + "'");
  const auto j = static_cast<std::size_t>(it - columns_.begin());
  std::vector<double> out;
  out.reserve(data_.size());
  for (const auto& r : data_) out.push_back(r[j]);
  return out;
}

double Trajectory::dt() const {
  if (times.size() < 2) return 0.0;
  return times[1] - times[0];
}

void Trajectory::push_back(double t, ScalarField f) {
  if (!snapshots.empty()) require_same_grid(snapshots.front(), f);
  times.push_back(t);
  snapshots.push_back(std::move(f));
}

std::vector<double> uniform_times(double dt, std::size_t steps) {
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || !(T > 0.0)) throw DomainError("need T > 0 and dt > 0");
  return static_cast<std::size_t>(std::llround(T / dt));
}

}  // namespace mras
