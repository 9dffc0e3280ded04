#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace berkskel {

enum class Severity { error, note };

struct ReportEntry {
  Severity severity = Severity::error;
  std::string check;
  std::vector<std::string> locations;
  std::string message;
  // Both sides of a failed identity, as exact rationals.
  std::optional<std::string> lhs;
  std::optional<std::string> rhs;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

/// Findings of a validator. Validators only ever add errors, so an empty
/// report means every check passed; notes are added by callers that want to
/// show passing identities as well.
class Report {
 public:
  void add(ReportEntry entry) { entries_.push_back(std::move(entry)); }

  void error(std::string check, std::vector<std::string> locations, std::string message) {
    entries_.push_back({Severity::error, std::move(check), std::move(locations), std::move(message), {}, {}});
  }

  void identity_failed(std::string check, std::vector<std::string> locations, std::string message,
                       std::string lhs, std::string rhs) {
    entries_.push_back(
        {Severity::error, std::move(check), std::move(locations), std::move(message), std::move(lhs), std::move(rhs)});
  }

  void note(std::string check, std::vector<std::string> locations, std::string message,
            std::optional<std::string> lhs = {}, std::optional<std::string> rhs = {}) {
    entries_.push_back(
        {Severity::note, std::move(check), std::move(locations), std::move(message), std::move(lhs), std::move(rhs)});
  }

  void merge(const Report& other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  }

  bool empty() const { return entries_.empty(); }
  bool passed() const {
    return std::none_of(entries_.begin(), entries_.end(),
                        [](const ReportEntry& e) { return e.severity == Severity::error; });
  }
  std::size_t error_count() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                  [](const ReportEntry& e) { return e.severity == Severity::error; }));
  }
  const std::vector<ReportEntry>& entries() const { return entries_; }

  bool has_check(const std::string& check) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const ReportEntry& e) { return e.check == check; });
  }

  // Stable order: by location ids, then check id, then insertion order.
  std::vector<ReportEntry> sorted() const {
    std::vector<ReportEntry> out = entries_;
    std::stable_sort(out.begin(), out.end(), [](const ReportEntry& a, const ReportEntry& b) {
      return std::tie(a.locations, a.check) < std::tie(b.locations, b.check);
    });
    return out;
  }

 private:
  std::vector<ReportEntry> entries_;
};

using BalanceReport = Report;
using ValidationReport = Report;

// One line per entry:
//   FAIL <check> [loc,loc] <message> lhs=<r> rhs=<r>
inline std::string render(const Report& report, bool color = false) {
  std::string out;
  for (const auto& e : report.sorted()) {
    bool err = e.severity == Severity::error;
    std::string tag = err ? "FAIL" : "ok";
    if (color) tag = (err ? "\x1b[31m" : "\x1b[32m") + tag + "\x1b[0m";
    out += tag + " " + e.check + " [";
    for (std::size_t i = 0; i < e.locations.size(); ++i) out += (i ? "," : "") + e.locations[i];
    out += "] " + e.message;
    if (e.lhs) out += " lhs=" + *e.lhs;
    if (e.rhs) out += " rhs=" + *e.rhs;
    out += "\n";
  }
  return out;
}

}  // namespace berkskel
