#include "mras/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "mras/io.hpp"

namespace mras {

double compute_slack(Sense sense, double measured, double bound) {
  return sense == Sense::AtMost ? bound - measured : measured - bound;
}

ReportEntry& VerificationReport::check(std::string name, double measured, double bound,
                                       Sense sense, double tolerance) {
  ReportEntry e;
  e.name = std::move(name);
  e.measured = measured;
  e.bound = bound;
  e.sense = sense;
  e.tolerance = tolerance;
  e.slack = compute_slack(sense, measured, bound);
  e.passed = std::isfinite(e.slack) && e.slack >= -tolerance;
  entries_.push_back(std::move(e));
  return entries_.back();
}

ReportEntry& VerificationReport::add(ReportEntry entry) {
  entries_.push_back(std::move(entry));
  return entries_.back();
}

void VerificationReport::append(const VerificationReport& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

const ReportEntry* VerificationReport::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

bool VerificationReport::all_passed() const { return failed_count() == 0; }

std::size_t VerificationReport::passed_count() const {
  std::size_t c = 0;
  for (const auto& e : entries_) c += (!e.informational && e.passed) ? 1 : 0;
  return c;
}

std::size_t VerificationReport::failed_count() const {
  std::size_t c = 0;
  for (const auto& e : entries_) c += (!e.informational && !e.passed) ? 1 : 0;
  return c;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    j["passed"] = e.passed;
    j["measured"] = e.measured;
    j["bound"] = e.bound;
    j["slack"] = e.slack;
    j["sense"] = e.sense == Sense::AtMost ? "at_most" : "at_least";
    j["tolerance"] = e.tolerance;
    if (e.t) j["t"] = *e.t;
    if (e.x) j["x"] = *e.x;
    if (!e.note.empty()) j["note"] = e.note;
    if (e.informational) j["informational"] = true;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["passed"] = passed_count();
  root["failed"] = failed_count();
  root["entries"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  for (const auto& e : entries_) {
    os << (e.informational ? "[info] " : e.passed ? "[pass] " : "[FAIL] ") << e.name
       << "  measured=" << format_number(e.measured)
       << (e.sense == Sense::AtMost ? "  <= " : "  >= ") << format_number(e.bound)
       << "  slack=" << format_number(e.slack);
    if (e.tolerance > 0.0) os << "  tol=" << format_number(e.tolerance);
    if (e.t) os << "  t=" << format_number(*e.t);
    if (e.x) os << "  x=" << format_number(*e.x);
    if (!e.note.empty()) os << "  (" << e.note << ")";
    os << "\n";
  }
  os << passed_count() << " passed, " << failed_count() << " failed\n";
  return os.str();
}

}  // namespace mras
