#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mras {

/// Direction of an inequality check. slack >= 0 iff the inequality holds:
/// AtMost: slack = bound - measured; AtLeast: slack = measured - bound.
enum class Sense { AtMost, AtLeast };

struct ReportEntry {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  Sense sense = Sense::AtMost;
  double tolerance = 0.0;
  std::optional<double> t;
  std::optional<double> x;
  std::string note;
  bool informational = false;  ///< recorded, never counted as a failure
};

double compute_slack(Sense sense, double measured, double bound);

class VerificationReport {
 public:
  /// Appends an inequality check; passed = slack >= -tolerance.
  ReportEntry& check(std::string name, double measured, double bound, Sense sense,
                     double tolerance = 0.0);
  ReportEntry& add(ReportEntry entry);
  void append(const VerificationReport& other);

  const std::vector<ReportEntry>& entries() const { return entries_; }
  std::vector<ReportEntry>& entries() { return entries_; }
  const ReportEntry* find(const std::string& name) const;

  bool all_passed() const;
  std::size_t passed_count() const;
  std::size_t failed_count() const;

  std::string to_json() const;
  std::string to_text() const;

 private:
  std::vector<ReportEntry> entries_;
};

}  // namespace mras
