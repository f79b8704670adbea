#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucantor/measure.hpp"

namespace ucantor {

struct Horizons {
  long checker_horizon = 12;
  std::vector<long> oracle_schedule{4, 6, 8, 10};
  long eval_depth = 14;
  long long budget = 2'000'000;
  Rational tolerance{1, 1000000};
  Rational growth_factor{3, 2};
  long describe_depth = 12;
  bool operator==(const Horizons&) const = default;
};

struct RunConfig {
  std::string name;
  CantorConfig cantor = CantorConfig::middle_thirds();
  MeasureSpec measure = MatchingSequence::uniform();
  Horizons horizons;
  bool operator==(const RunConfig&) const = default;
};

/// Throws ParseError for malformed JSON or a wrong shape, ValidationError
/// when the content violates a construction invariant.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);
/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize_run_config(const RunConfig& config);

// Building blocks shared with the report writer.
nlohmann::json to_json(const Rational& r);
nlohmann::json to_json(const SequenceSpec& s);
nlohmann::json to_json(const ProbVector& p);
nlohmann::json to_json(const Word& w);
nlohmann::json to_json(const MeasureSpec& m);

}  // namespace ucantor
