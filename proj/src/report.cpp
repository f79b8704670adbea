#include "ucantor/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "ucantor/error.hpp"

namespace ucantor {

using nlohmann::json;

namespace {

json optional_rational(const std::optional<Rational>& r) { return r ? to_json(*r) : json(nullptr); }

json bracket_json(const Bracket& b) { return json{{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}}; }

json point_json(const SeriesPoint& p) {
  return json{{"K", p.K},
              {"sup_ratio", to_json(p.sup_ratio)},
              {"sup_ratio_decimal", to_decimal(p.sup_ratio)},
              {"x", to_json(p.x)},
              {"r", to_json(p.r)},
              {"exact", p.exact}};
}

const MatchingSequence* level_sequence(const MeasureSpec& m) {
  if (const auto* s = std::get_if<MatchingSequence>(&m)) return s;
  if (const auto* rule = std::get_if<WordMeasureRule>(&m))
    if (const auto* lo = std::get_if<LevelOnlyRule>(rule)) return &lo->sequence;
  return nullptr;
}

CheckOptions check_options(const Horizons& h, bool symbolic) {
  CheckOptions o;
  o.horizon = h.checker_horizon;
  o.symbolic = symbolic;
  o.budget = h.budget;
  return o;
}

json error_json(const Error& e) {
  static const char* names[] = {"parse", "validation", "inapplicable", "budget", "internal"};
  return json{{"applicable", e.kind() != ErrorKind::Inapplicable},
              {"error", names[static_cast<int>(e.kind())]},
              {"reason", e.what()}};
}

}  // namespace

json to_json(const ConditionRecord& r) {
  json out{{"k", r.k}, {"kind", to_string(r.kind)}, {"constant", to_json(r.constant)}};
  if (r.t) out["t"] = *r.t;
  if (r.s) out["s"] = *r.s;
  if (r.windows) out["windows"] = {{"i", r.windows->i}, {"j", r.windows->j}, {"l", r.windows->l}};
  if (r.word) out["word"] = to_json(*r.word);
  if (r.gap_index) out["gap_index"] = *r.gap_index;
  return out;
}

json to_json(const DoublingVerdict& v) {
  json records = json::array(), witness = json::array();
  for (const auto& r : v.records) records.push_back(to_json(r));
  for (const auto& r : v.witness) witness.push_back(to_json(r));
  return json{{"outcome", to_string(v.outcome)},
              {"C", optional_rational(v.C)},
              {"checked_up_to", v.checked_up_to},
              {"fallback", v.fallback},
              {"basis", v.basis},
              {"records", records},
              {"witness", witness}};
}

json describe_json(const RunConfig& rc) {
  const long depth = rc.horizons.describe_depth;
  LevelTable table(rc.cantor, depth);
  json rows = json::array();
  for (long k = 0; k <= depth; ++k) {
    const LevelStats& st = table[k];
    json row{{"k", k}, {"N", to_string(st.count)}, {"delta", to_json(st.delta)}};
    if (k == 0) {
      row["epsilon"] = nullptr;
      row["n"] = nullptr;
      row["c"] = nullptr;
      row["lambda"] = false;
    } else {
      row["epsilon"] = to_json(*st.epsilon);
      row["n"] = rc.cantor.n_at(k);
      row["c"] = to_json(rc.cantor.c_at(k));
      const auto gc = gap_context(table, k);
      row["lambda"] = gc.has_value();
      if (gc) {
        row["m"] = gc->m;
        row["s"] = gc->s;
      }
    }
    rows.push_back(row);
  }
  const LpVerdict lp = lp_membership(rc.cantor, 1);
  return json{{"name", rc.name},
              {"levels", rows},
              {"lebesgue_measure", bracket_json(lebesgue_of_E(rc.cantor, rc.horizons.tolerance))},
              {"nc_in_l1", lp.member},
              {"gap_depth_unbounded", gap_depth_unbounded(rc.cantor)},
              {"ultimately_uniform_from", ultimately_one_uniform_index(rc.measure)
                                              ? json(*ultimately_one_uniform_index(rc.measure))
                                              : json(nullptr)}};
}

json check_json(const RunConfig& rc, bool symbolic) {
  const CheckOptions opts = check_options(rc.horizons, symbolic);
  json out{{"name", rc.name}, {"symbolic", symbolic}};
  if (const auto* rule = std::get_if<WordMeasureRule>(&rc.measure)) {
    const auto v = check_theorem2(rc.cantor, *rule, opts);
    out["word_indexed"] = to_json(v);
    out["verdict"] = to_string(v.outcome);
  }
  if (const MatchingSequence* seq = level_sequence(rc.measure)) {
    const auto v = check_theorem1(rc.cantor, *seq, opts);
    out["level_indexed"] = to_json(v);
    out["verdict"] = to_string(v.outcome);
    json cors = json::object();
    for (int which = 1; which <= 3; ++which) {
      try {
        json c = to_json(check_corollary(rc.cantor, *seq, which, opts));
        c["applicable"] = true;
        cors[std::to_string(which)] = c;
      } catch (const InapplicableError& e) {
        cors[std::to_string(which)] = error_json(e);
      }
    }
    out["shortcuts"] = cors;
  }
  return out;
}

OracleOptions oracle_options(const Horizons& h) {
  OracleOptions o;
  o.budget = h.budget;
  o.eval_depth = h.eval_depth;
  o.growth_factor = h.growth_factor;
  return o;
}

json oracle_json(const OracleReport& report, const Horizons& h) {
  json series = json::array();
  std::vector<Rational> values;
  for (const auto& p : report.series) {
    series.push_back(point_json(p));
    values.push_back(p.sup_ratio);
  }
  json out{{"K", report.K},
           {"eval_depth", report.eval_depth},
           {"sup_ratio_lower", to_json(report.sup_ratio_lower)},
           {"sup_ratio_decimal", to_decimal(report.sup_ratio_lower)},
           {"witness", {{"x", to_json(report.witness_x)}, {"r", to_json(report.witness_r)}}},
           {"exact", report.exact},
           {"enumeration", {{"mode", to_string(report.mode)}, {"truncated", report.truncated}, {"balls", report.balls}}},
           {"series", series},
           {"growth_factor", to_json(h.growth_factor)}};
  out["growth"] = values.size() >= 3 ? json(to_string(classify_series(values, h.growth_factor))) : json(nullptr);
  return out;
}

json extend_json(const RunConfig& rc) {
  std::vector<long> schedule = rc.horizons.oracle_schedule;
  const ExtensionVerdict v = check_theorem3(rc.cantor, rc.measure, schedule, rc.horizons.tolerance);
  json out{{"name", rc.name},
           {"outcome", to_string(v.outcome)},
           {"lp", {{"q", to_json(v.lp.q)}, {"member", v.lp.member}, {"reason", v.lp.reason}}}};
  if (!v.nu) {
    out["reason"] = "l1: {n_k c_k} is not summable";
    return out;
  }
  json pieces = json::array();
  for (const auto& p : v.nu->pieces) {
    json piece{{"lo", to_json(p.interval.lo)}, {"hi", to_json(p.interval.hi)}, {"density", bracket_json(p.density)}};
    piece["word"] = p.word ? to_json(*p.word) : json(nullptr);
    pieces.push_back(piece);
  }
  json series = json::array();
  for (const auto& p : v.nu_series) series.push_back(point_json(p));
  out["nu"] = {{"k0", v.nu->k0},
               {"pieces", pieces},
               {"component_set_length", bracket_json(v.nu->component_set_length)},
               {"restricted_total", bracket_json(v.mass)}};
  out["restriction"] = {{"depth", v.restriction.depth},
                        {"components", v.restriction.components},
                        {"passed", v.restriction.passed},
                        {"failure", v.restriction.failure ? to_json(*v.restriction.failure) : json(nullptr)}};
  out["nu_oracle"] = {{"series", series},
                      {"bound", to_json(v.nu_bound)},
                      {"within_bound", v.nu_within_bound},
                      {"growth", v.nu_growth ? json(to_string(*v.nu_growth)) : json(nullptr)}};
  return out;
}

json cross_validate_json(const std::filesystem::path& dir, bool symbolic) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  json rows = json::array();
  json matrix = json::object();
  long agree = 0, disagree = 0, undecided = 0, failed = 0;
  for (const auto& f : files) {
    json row{{"file", f.filename().string()}};
    try {
      const RunConfig rc = load_run_config(f);
      row["name"] = rc.name;
      const CheckOptions opts = check_options(rc.horizons, symbolic);
      DoublingVerdict v;
      if (const MatchingSequence* seq = level_sequence(rc.measure))
        v = check_theorem1(rc.cantor, *seq, opts);
      else
        v = check_theorem2(rc.cantor, std::get<WordMeasureRule>(rc.measure), opts);
      const GrowthReport g =
          growth_classification(rc.measure, rc.cantor, rc.horizons.oracle_schedule, oracle_options(rc.horizons));
      const std::string checker = to_string(v.outcome), oracle = to_string(g.label);
      row["checker"] = checker;
      row["oracle"] = oracle;
      json series = json::array();
      for (const auto& p : g.report.series) series.push_back(to_json(p.sup_ratio));
      row["series"] = series;
      if (v.outcome == Outcome::Unknown) {
        row["agree"] = nullptr;
        ++undecided;
      } else {
        const bool ok = (v.outcome == Outcome::Doubling) == (g.label == Growth::Bounded);
        row["agree"] = ok;
        ++(ok ? agree : disagree);
      }
      auto& cell = matrix[checker][oracle];
      cell = cell.is_null() ? 1 : cell.get<long>() + 1;
    } catch (const Error& e) {
      row["error"] = error_json(e);
      ++failed;
    }
    rows.push_back(row);
  }
  return json{{"directory", dir.filename().string()},
              {"configs", rows},
              {"matrix", matrix},
              {"summary", {{"agree", agree}, {"disagree", disagree}, {"undecided", undecided}, {"failed", failed}}}};
}

std::string render_report(const std::string& command, json body, const std::string& timestamp) {
  body["schema"] = 1;
  body["command"] = command;
  body["generated_at"] = timestamp;
  return body.dump(2) + "\n";
}

std::string timestamp_now() {
  std::time_t t;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env)
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  else
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string series_csv(const OracleReport& report) {
  std::ostringstream out;
  out << "depth,sup_ratio,exact\n";
  for (const auto& p : report.series)
    out << p.K << ',' << to_decimal(p.sup_ratio, 12) << ',' << (p.exact ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace ucantor
