#pragma once

// Run reports for the command-line tool. JSON output is canonical: object
// keys are emitted sorted, violations arrive pre-sorted from the suites, and
// timing is text-only, so a fixed command line and seed produce identical
// bytes. Text output is for humans and carries no stability promise.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include <galkit/closure.hpp>

namespace galkit {

using Json = nlohmann::json;

inline std::string format_elems(const std::vector<int32_t>& e) {
  std::string out = "{";
  for (size_t i = 0; i < e.size(); ++i) out += (i ? "," : "") + std::to_string(e[i]);
  return out + "}";
}

struct Report {
  std::vector<std::string> command;
  std::map<std::string, std::string> inputs;  // path as given -> content hash
  Json results = Json::object();
  std::vector<ClosureViolation> violations;
  std::vector<std::string> text;  // human-format lines
  double seconds = 0;             // never serialised to JSON

  void note(std::string line) { text.push_back(std::move(line)); }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["results"] = results;
    Json vs = Json::array();
    for (const auto& v : violations)
      vs.push_back({{"what", v.axiom}, {"where", v.where}, {"witness", v.witness}});
    j["violations"] = vs;
    return j;
  }

  std::string to_text() const {
    std::string out;
    for (const auto& l : text) out += l + "\n";
    for (const auto& v : violations)
      out += cat("violation: ", v.axiom, " @ ", v.where, " :: ", v.witness, "\n");
    return out;
  }
};

}  // namespace galkit
