// sector-lab: experiment runner CLI.
//
//   sector-lab list
//   sector-lab <experiment-kind> --config cfg.json --out report.json \
//              --format json --seed 42
//
// Exit code 0 iff every verdict declared by the experiment passed.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sectorlab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for sectorial-operator square functions"};
  app.require_subcommand(0, 1);

  CLI::App* list = app.add_subcommand("list", "print the experiment catalog");

  std::string kind, config_path, out_path, format = "json";
  std::uint64_t seed = 1;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("kind", kind, "experiment kind (see `sector-lab list`)")->required();
  run->add_option("--config", config_path, "JSON config file; defaults used when omitted");
  run->add_option("--out", out_path, "output path; stdout when omitted");
  run->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--seed", seed, "random seed (u64)");

  // `sector-lab <kind> ...` without the explicit run verb
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args[0] != "list" && args[0] != "run" && args[0][0] != '-') {
    args.insert(args.begin(), "run");
  }
  std::vector<char*> argv2;
  std::string prog = argv[0];
  argv2.push_back(prog.data());
  for (auto& a : args) argv2.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (list->parsed()) {
      for (const auto& [name, desc] : sectorlab::experiment_catalog())
        std::cout << name << "  -  " << desc << "\n";
      return 0;
    }
    if (!run->parsed()) {
      std::cout << app.help();
      return 0;
    }

    nlohmann::json config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw sectorlab::IoError("cannot read config file " + config_path);
      in >> config;
    }

    const sectorlab::ExperimentReport report =
        sectorlab::run_experiment(kind, config, seed);

    const sectorlab::ReportFormat fmt =
        format == "csv" ? sectorlab::ReportFormat::csv : sectorlab::ReportFormat::json;
    if (out_path.empty()) {
      if (fmt == sectorlab::ReportFormat::json)
        std::cout << sectorlab::report_to_json(report).dump(2) << "\n";
      else
        std::cout << sectorlab::report_to_csv(report);
    } else {
      sectorlab::emit_report(report, fmt, out_path);
    }

    for (const auto& [name, passed] : report.verdicts)
      std::cerr << (passed ? "[pass] " : "[FAIL] ") << name << "\n";
    return report.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
