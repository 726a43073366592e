#include "cosetlab/report.hpp"

#include <sstream>

#include <json.hpp>

#include "cosetlab/finite_math.hpp"

namespace cosetlab {

using ordered_json = nlohmann::ordered_json;

std::string PropositionReport::to_text() const {
  ordered_json j;
  j["name"] = name;
  j["lhs"] = format_decimal(lhs);
  j["rhs"] = format_decimal(rhs);
  j["margin"] = format_decimal(margin);
  j["verdict"] = verdict;
  ordered_json inter;
  for (const auto& [k, v] : intermediates) inter[k] = format_decimal(v);
  j["intermediates"] = inter;
  return j.dump(2) + "\n";
}

PropositionReport PropositionReport::from_text(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  PropositionReport r;
  r.name = j.at("name").get<std::string>();
  r.lhs = parse_decimal(j.at("lhs").get<std::string>());
  r.rhs = parse_decimal(j.at("rhs").get<std::string>());
  r.margin = parse_decimal(j.at("margin").get<std::string>());
  r.verdict = j.at("verdict").get<bool>();
  for (const auto& [k, v] : j.at("intermediates").items())
    r.intermediates[k] = parse_decimal(v.get<std::string>());
  return r;
}

std::string PropositionReport::to_csv_row() const {
  std::ostringstream os;
  os << name << ',' << format_decimal(lhs) << ','
     << format_decimal(rhs) << ',' << format_decimal(margin) << ','
     << (verdict ? "true" : "false");
  return os.str();
}

const char* PropositionReport::csv_header() {
  return "name,lhs,rhs,margin,verdict";
}

bool operator==(const PropositionReport& a, const PropositionReport& b) {
  return a.name == b.name && a.lhs == b.lhs && a.rhs == b.rhs &&
         a.margin == b.margin && a.verdict == b.verdict &&
         a.intermediates == b.intermediates;
}

}  // namespace cosetlab
