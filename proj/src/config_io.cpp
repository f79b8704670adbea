#include "ucantor/config_io.hpp"

#include <fstream>
#include <sstream>

#include "ucantor/error.hpp"

namespace ucantor {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

std::string kind_of(const json& obj, const std::string& where) {
  const json& k = field(obj, "kind", where);
  if (!k.is_string()) throw ParseError(where + ": \"kind\" must be a string");
  return k.get<std::string>();
}

Rational rational_from(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  throw ParseError(where + ": rationals must be \"p/q\" strings, got " + v.dump());
}

long integer_from(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer, got " + v.dump());
  return v.get<long>();
}

std::vector<Rational> rationals_from(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<Rational> out;
  for (const auto& e : v) out.push_back(rational_from(e, where));
  return out;
}

SequenceSpec sequence_from(const json& obj, const std::string& where) {
  std::vector<Rational> prefix;
  if (obj.contains("prefix")) prefix = rationals_from(obj["prefix"], where + ".prefix");
  const json& tail = field(obj, "tail", where);
  const std::string kind = kind_of(tail, where + ".tail");
  if (kind == "constant") return {prefix, ConstantTail{rational_from(field(tail, "value", where), where)}};
  if (kind == "periodic") {
    auto values = rationals_from(field(tail, "values", where), where + ".tail.values");
    if (values.empty()) throw ValidationError(where + ": periodic tail needs at least one value");
    return {prefix, PeriodicTail{values}};
  }
  if (kind == "geometric")
    return {prefix, GeometricTail{rational_from(field(tail, "coefficient", where), where),
                                  rational_from(field(tail, "ratio", where), where)}};
  if (kind == "power") {
    const long e = integer_from(field(tail, "exponent", where), where + ".tail.exponent");
    if (e < 1) throw ValidationError(where + ": power exponent must be >= 1");
    return {prefix, PowerTail{rational_from(field(tail, "coefficient", where), where), static_cast<unsigned>(e)}};
  }
  throw ParseError(where + ": unknown tail kind \"" + kind + "\"");
}

ProbVector vector_from(const json& v, const std::string& where) { return ProbVector(rationals_from(v, where)); }

Word word_from(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": word must be an array of letters");
  Word w;
  for (const auto& e : v) w.letters.push_back(static_cast<int>(integer_from(e, where)));
  return w;
}

MatchingSequence matching_from(const json& obj, const std::string& where) {
  std::vector<ProbVector> prefix;
  if (obj.contains("prefix")) {
    if (!obj["prefix"].is_array()) throw ParseError(where + ".prefix: expected an array of vectors");
    for (const auto& v : obj["prefix"]) prefix.push_back(vector_from(v, where + ".prefix"));
  }
  if (!obj.contains("tail")) return {prefix, UniformVectorTail{}};
  const json& tail = obj["tail"];
  const std::string kind = kind_of(tail, where + ".tail");
  if (kind == "uniform") return {prefix, UniformVectorTail{}};
  if (kind == "periodic") {
    PeriodicVectorTail t;
    const json& vs = field(tail, "vectors", where + ".tail");
    if (!vs.is_array()) throw ParseError(where + ".tail.vectors: expected an array");
    for (const auto& v : vs) t.vectors.push_back(vector_from(v, where + ".tail.vectors"));
    if (t.vectors.empty()) throw ValidationError(where + ": periodic vector tail needs at least one vector");
    return {prefix, t};
  }
  throw ParseError(where + ": unknown vector tail kind \"" + kind + "\"");
}

MeasureSpec measure_from(const json& obj) {
  const std::string where = "measure";
  const std::string kind = kind_of(obj, where);
  if (kind == "matching") return matching_from(obj, where);
  if (kind == "level_only") return WordMeasureRule{LevelOnlyRule{matching_from(obj, where)}};
  if (kind == "last_letter") {
    LastLetterRule r{integer_from(field(obj, "period", where), where + ".period"),
                     vector_from(field(obj, "root", where), where + ".root"),
                     {}};
    const json& table = field(obj, "table", where);
    if (!table.is_array()) throw ParseError(where + ".table: expected an array");
    for (const auto& e : table) {
      const long phase = integer_from(field(e, "phase", where + ".table"), where + ".table.phase");
      const long letter = integer_from(field(e, "letter", where + ".table"), where + ".table.letter");
      if (!r.table.emplace(std::make_pair(phase, static_cast<int>(letter)),
                           vector_from(field(e, "vector", where + ".table"), where + ".table.vector"))
               .second)
        throw ValidationError(where + ".table: duplicate entry for phase " + std::to_string(phase) + ", letter " +
                              std::to_string(letter));
    }
    return WordMeasureRule{r};
  }
  if (kind == "word_table") {
    WordTableRule r{{}, matching_from(field(obj, "default", where), where + ".default")};
    const json& entries = field(obj, "entries", where);
    if (!entries.is_array()) throw ParseError(where + ".entries: expected an array");
    for (const auto& e : entries) {
      Word w = word_from(field(e, "word", where + ".entries"), where + ".entries.word");
      if (!r.entries.emplace(w, vector_from(field(e, "vector", where + ".entries"), where + ".entries.vector")).second)
        throw ValidationError(where + ".entries: duplicate word " + w.str());
    }
    return WordMeasureRule{r};
  }
  throw ParseError(where + ": unknown measure kind \"" + kind + "\"");
}

std::vector<long> schedule_from(const json& v) {
  if (!v.is_array()) throw ParseError("horizons.oracle_schedule: expected an array");
  std::vector<long> out;
  for (const auto& e : v) out.push_back(integer_from(e, "horizons.oracle_schedule"));
  return out;
}

void validate_horizons(const Horizons& h) {
  if (h.checker_horizon < 1) throw ValidationError("horizons.checker_horizon must be >= 1");
  if (h.eval_depth < 1) throw ValidationError("horizons.eval_depth must be >= 1");
  if (h.budget < 1) throw ValidationError("horizons.budget must be positive");
  if (h.tolerance <= 0) throw ValidationError("horizons.tolerance must be positive");
  if (h.growth_factor <= 1) throw ValidationError("horizons.growth_factor must exceed 1");
  if (h.describe_depth < 1) throw ValidationError("horizons.describe_depth must be >= 1");
  if (h.oracle_schedule.empty()) throw ValidationError("horizons.oracle_schedule is empty");
  for (std::size_t i = 0; i < h.oracle_schedule.size(); ++i) {
    if (h.oracle_schedule[i] < 1) throw ValidationError("horizons.oracle_schedule entries must be >= 1");
    if (i > 0 && h.oracle_schedule[i] <= h.oracle_schedule[i - 1])
      throw ValidationError("horizons.oracle_schedule must be strictly increasing");
  }
}

Horizons horizons_from(const json& obj) {
  Horizons h;
  if (!obj.is_object()) throw ParseError("horizons: expected an object");
  for (const auto& [key, v] : obj.items()) {
    if (key == "checker_horizon") h.checker_horizon = integer_from(v, key);
    else if (key == "oracle_schedule") h.oracle_schedule = schedule_from(v);
    else if (key == "eval_depth") h.eval_depth = integer_from(v, key);
    else if (key == "budget") h.budget = integer_from(v, key);
    else if (key == "tolerance") h.tolerance = rational_from(v, key);
    else if (key == "growth_factor") h.growth_factor = rational_from(v, key);
    else if (key == "describe_depth") h.describe_depth = integer_from(v, key);
    else throw ParseError("horizons: unknown key \"" + key + "\"");
  }
  validate_horizons(h);
  return h;
}

json to_json(const VectorTail& tail) {
  return std::visit(overloaded{
                        [](const UniformVectorTail&) { return json{{"kind", "uniform"}}; },
                        [](const PeriodicVectorTail& t) {
                          json vs = json::array();
                          for (const auto& v : t.vectors) vs.push_back(to_json(v));
                          return json{{"kind", "periodic"}, {"vectors", vs}};
                        },
                    },
                    tail);
}

json matching_json(const MatchingSequence& m, const char* kind) {
  json prefix = json::array();
  for (const auto& v : m.prefix()) prefix.push_back(to_json(v));
  json out{{"prefix", prefix}, {"tail", to_json(m.tail())}};
  if (kind) out["kind"] = kind;
  return out;
}

}  // namespace

json to_json(const Rational& r) { return to_string(r); }

json to_json(const SequenceSpec& s) {
  json prefix = json::array();
  for (const auto& v : s.prefix()) prefix.push_back(to_json(v));
  json tail = std::visit(
      overloaded{
          [](const ConstantTail& t) { return json{{"kind", "constant"}, {"value", to_json(t.value)}}; },
          [](const PeriodicTail& t) {
            json vs = json::array();
            for (const auto& v : t.values) vs.push_back(to_json(v));
            return json{{"kind", "periodic"}, {"values", vs}};
          },
          [](const GeometricTail& t) {
            return json{{"kind", "geometric"}, {"coefficient", to_json(t.coefficient)}, {"ratio", to_json(t.ratio)}};
          },
          [](const PowerTail& t) {
            return json{{"kind", "power"}, {"coefficient", to_json(t.coefficient)}, {"exponent", t.exponent}};
          },
      },
      s.tail());
  return json{{"prefix", prefix}, {"tail", tail}};
}

json to_json(const ProbVector& p) {
  json out = json::array();
  for (const auto& e : p.entries()) out.push_back(to_json(e));
  return out;
}

json to_json(const Word& w) { return json(w.letters); }

json to_json(const MeasureSpec& m) {
  return std::visit(
      overloaded{
          [](const MatchingSequence& s) { return matching_json(s, "matching"); },
          [](const WordMeasureRule& rule) {
            return std::visit(overloaded{
                                  [](const LevelOnlyRule& r) { return matching_json(r.sequence, "level_only"); },
                                  [](const LastLetterRule& r) {
                                    json table = json::array();
                                    for (const auto& [key, v] : r.table)
                                      table.push_back({{"phase", key.first}, {"letter", key.second}, {"vector", to_json(v)}});
                                    return json{{"kind", "last_letter"},
                                                {"period", r.period},
                                                {"root", to_json(r.root)},
                                                {"table", table}};
                                  },
                                  [](const WordTableRule& r) {
                                    json entries = json::array();
                                    for (const auto& [w, v] : r.entries)
                                      entries.push_back({{"word", to_json(w)}, {"vector", to_json(v)}});
                                    return json{{"kind", "word_table"},
                                                {"entries", entries},
                                                {"default", matching_json(r.fallback, nullptr)}};
                                  },
                              },
                              rule);
          },
      },
      m);
}

RunConfig parse_run_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  const json& schema = field(doc, "schema", "config");
  if (!schema.is_number_integer() || schema.get<long>() != 1)
    throw ParseError("config: unsupported schema " + schema.dump() + " (expected 1)");
  for (const auto& [key, v] : doc.items())
    if (key != "schema" && key != "name" && key != "cantor" && key != "measure" && key != "horizons")
      throw ParseError("config: unknown key \"" + key + "\"");

  try {
    RunConfig rc;
    if (doc.contains("name")) {
      if (!doc["name"].is_string()) throw ParseError("config.name must be a string");
      rc.name = doc["name"].get<std::string>();
    }
    const json& cantor = field(doc, "cantor", "config");
    rc.cantor = CantorConfig(sequence_from(field(cantor, "n", "cantor"), "cantor.n"),
                             sequence_from(field(cantor, "c", "cantor"), "cantor.c"));
    if (doc.contains("measure")) rc.measure = measure_from(doc["measure"]);
    validate_measure(rc.measure, rc.cantor);
    if (doc.contains("horizons")) rc.horizons = horizons_from(doc["horizons"]);
    return rc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config has the wrong shape: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

json to_json(const RunConfig& rc) {
  const Horizons& h = rc.horizons;
  return json{{"schema", 1},
              {"name", rc.name},
              {"cantor", {{"n", to_json(rc.cantor.n())}, {"c", to_json(rc.cantor.c())}}},
              {"measure", to_json(rc.measure)},
              {"horizons",
               {{"checker_horizon", h.checker_horizon},
                {"oracle_schedule", h.oracle_schedule},
                {"eval_depth", h.eval_depth},
                {"budget", h.budget},
                {"tolerance", to_json(h.tolerance)},
                {"growth_factor", to_json(h.growth_factor)},
                {"describe_depth", h.describe_depth}}}};
}

std::string serialize_run_config(const RunConfig& rc) { return to_json(rc).dump(2) + "\n"; }

}  // namespace ucantor
