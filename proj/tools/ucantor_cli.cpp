// ucantor: describe / check / oracle / extend / cross-validate.
//
// Exit status: 0 ok, 1 usage, 2 parse, 3 validation, 4 inapplicable,
// 5 budget exceeded, 70 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ucantor/error.hpp"
#include "ucantor/report.hpp"

namespace fs = std::filesystem;
using namespace ucantor;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kInapplicable = 4, kBudget = 5, kInternal = 70 };

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::Validation: return kValidation;
    case ErrorKind::Inapplicable: return kInapplicable;
    case ErrorKind::Budget: return kBudget;
    case ErrorKind::Internal: return kInternal;
  }
  return kInternal;
}

struct Flags {
  std::string input;
  long horizon = -1;
  std::vector<long> schedule;
  long long budget = -1;
  long eval_depth = -1;
  bool symbolic = false;
  std::string out;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
}

void emit(const Flags& flags, const std::string& command, const std::string& report,
          const std::string* csv = nullptr) {
  if (flags.out.empty()) {
    std::cout << report;
    return;
  }
  fs::create_directories(flags.out);
  write_file(fs::path(flags.out) / (command + ".json"), report);
  if (csv) write_file(fs::path(flags.out) / (command + "_series.csv"), *csv);
  std::cerr << "wrote " << (fs::path(flags.out) / (command + ".json")).string() << '\n';
}

RunConfig load_with_overrides(const Flags& flags, bool horizon_is_describe) {
  RunConfig rc = load_run_config(flags.input);
  Horizons& h = rc.horizons;
  if (flags.horizon > 0) (horizon_is_describe ? h.describe_depth : h.checker_horizon) = flags.horizon;
  if (flags.horizon == 0) throw ValidationError("--horizon must be >= 1");
  if (!flags.schedule.empty()) {
    for (std::size_t i = 0; i < flags.schedule.size(); ++i)
      if (flags.schedule[i] < 1 || (i > 0 && flags.schedule[i] <= flags.schedule[i - 1]))
        throw ValidationError("--schedule must be strictly increasing positive depths");
    h.oracle_schedule = flags.schedule;
  }
  if (flags.budget == 0) throw ValidationError("--budget must be positive");
  if (flags.budget > 0) h.budget = flags.budget;
  if (flags.eval_depth > 0) h.eval_depth = flags.eval_depth;
  return rc;
}

int run(const std::string& command, const Flags& flags) {
  const std::string stamp = timestamp_now();
  if (command == "describe") {
    const RunConfig rc = load_with_overrides(flags, true);
    emit(flags, command, render_report(command, describe_json(rc), stamp));
  } else if (command == "check") {
    const RunConfig rc = load_with_overrides(flags, false);
    emit(flags, command, render_report(command, check_json(rc, flags.symbolic), stamp));
  } else if (command == "oracle") {
    const RunConfig rc = load_with_overrides(flags, false);
    const OracleReport rep =
        sup_doubling_series(rc.measure, rc.cantor, rc.horizons.oracle_schedule, oracle_options(rc.horizons));
    nlohmann::json body = oracle_json(rep, rc.horizons);
    body["name"] = rc.name;
    const std::string csv = series_csv(rep);
    emit(flags, command, render_report(command, body, stamp), &csv);
  } else if (command == "extend") {
    const RunConfig rc = load_with_overrides(flags, false);
    emit(flags, command, render_report(command, extend_json(rc), stamp));
  } else if (command == "cross-validate") {
    emit(flags, command, render_report(command, cross_validate_json(flags.input, flags.symbolic), stamp));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform Cantor sets: doubling checks, ball oracle and extensions"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub, const char* input_help) {
    sub->add_option("input", flags.input, input_help)->required();
    sub->add_option("--horizon", flags.horizon, "checker horizon K (describe: table depth)");
    sub->add_option("--schedule", flags.schedule, "oracle depth schedule a,b,c")->delimiter(',');
    sub->add_option("--budget", flags.budget, "enumeration budget");
    sub->add_option("--eval-depth", flags.eval_depth, "depth at which ball masses are resolved");
    sub->add_flag("--symbolic", flags.symbolic, "decide all levels from the tail rules");
    sub->add_option("--out", flags.out, "write reports into this directory instead of stdout");
  };
  add_common(app.add_subcommand("describe", "level table with Lambda, m_k, s_k"), "config JSON");
  add_common(app.add_subcommand("check", "doubling conditions and shortcut criteria"), "config JSON");
  add_common(app.add_subcommand("oracle", "brute-force sup-ratio series"), "config JSON");
  add_common(app.add_subcommand("extend", "extension to [0,1] and its verification"), "config JSON");
  add_common(app.add_subcommand("cross-validate", "checker vs oracle over a directory of configs"),
             "directory of config JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (const auto* b = dynamic_cast<const BudgetError*>(&e); b && b->largest_feasible() >= 0)
      std::cerr << "largest feasible depth: " << b->largest_feasible() << '\n';
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
