#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "ucantor/error.hpp"

using namespace ucantor;
using namespace ucantor::testing;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string minimal(const std::string& n, const std::string& c, const std::string& measure) {
  return R"({"schema": 1, "cantor": {"n": )" + n + R"(, "c": )" + c + R"(}, "measure": )" + measure + "}";
}

const std::string kTwo = R"({"prefix": [], "tail": {"kind": "constant", "value": "2"}})";
const std::string kThird = R"({"prefix": [], "tail": {"kind": "constant", "value": "1/3"}})";
const std::string kUniform = R"({"kind": "matching", "prefix": [], "tail": {"kind": "uniform"}})";

}  // namespace

TEST_CASE("corpus round-trips") {
  const auto files = corpus_files();
  CHECK(files.size() >= 20);
  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    const auto rc = load_run_config(f);
    const auto text = serialize_run_config(rc);
    const auto again = parse_run_config(text);
    CHECK(again == rc);
    CHECK(serialize_run_config(again) == text);
    validate_measure(rc.measure, rc.cantor);
  }
}

TEST_CASE("corpus files are canonical") {
  for (const auto& f : corpus_files()) {
    CAPTURE(f.filename().string());
    const auto rc = load_run_config(f);
    CHECK(parse_run_config(read(f)) == rc);
  }
}

TEST_CASE("minimal document") {
  const auto rc = parse_run_config(minimal(kTwo, kThird, kUniform));
  CHECK(rc.cantor == CantorConfig::middle_thirds());
  CHECK(rc.horizons == Horizons{});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_run_config("{"), ParseError);
  CHECK_THROWS_AS(parse_run_config("[]"), ParseError);
  const std::string float_c = R"({"prefix": [], "tail": {"kind": "constant", "value": 0.3333}})";
  CHECK_THROWS_AS(parse_run_config(minimal(kTwo, float_c, kUniform)), ParseError);
  const std::string bad_kind = R"({"prefix": [], "tail": {"kind": "spiral", "value": "1/3"}})";
  CHECK_THROWS_AS(parse_run_config(minimal(kTwo, bad_kind, kUniform)), ParseError);
  auto wrong_schema = minimal(kTwo, kThird, kUniform);
  wrong_schema.replace(wrong_schema.find("\"schema\": 1"), 11, "\"schema\": 2");
  CHECK_THROWS_AS(parse_run_config(wrong_schema), ParseError);
  auto extra = minimal(kTwo, kThird, kUniform);
  extra.insert(1, R"("colour": "blue", )");
  CHECK_THROWS_AS(parse_run_config(extra), ParseError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ParseError);
}

TEST_CASE("validation errors") {
  const std::string one = R"({"prefix": [], "tail": {"kind": "constant", "value": "1"}})";
  CHECK_THROWS_AS(parse_run_config(minimal(one, kThird, kUniform)), ValidationError);
  const std::string big_c = R"({"prefix": [], "tail": {"kind": "constant", "value": "3/2"}})";
  CHECK_THROWS_AS(parse_run_config(minimal(kTwo, big_c, kUniform)), ValidationError);
  const std::string bad_vec = R"({"kind": "matching", "prefix": [["1/2", "1/3"]], "tail": {"kind": "uniform"}})";
  CHECK_THROWS_AS(parse_run_config(minimal(kTwo, kThird, bad_vec)), ValidationError);
  const std::string wrong_len = R"({"kind": "matching", "prefix": [["1/3", "1/3", "1/3"]], "tail": {"kind": "uniform"}})";
  CHECK_THROWS_AS(parse_run_config(minimal(kTwo, kThird, wrong_len)), ValidationError);
}
