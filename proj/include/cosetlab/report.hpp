#pragma once
// Machine-readable verdict records. Both proposition checks and the
// Monte Carlo simulator serialize to the same structured text (JSON)
// layout consumed by the CLI's --format structured mode.

#include <map>
#include <string>

namespace cosetlab {

// Both sides of a proposition inequality plus a signed margin. Each
// check documents its margin orientation; the verdict always agrees with
// the margin's sign under that convention.
struct PropositionReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool verdict = false;
  std::map<std::string, double> intermediates;

  std::string to_text() const;  // structured JSON document
  static PropositionReport from_text(const std::string& text);

  // one CSV row: name,lhs,rhs,margin,verdict
  std::string to_csv_row() const;
  static const char* csv_header();  // without trailing newline
};

bool operator==(const PropositionReport& a, const PropositionReport& b);

}  // namespace cosetlab
