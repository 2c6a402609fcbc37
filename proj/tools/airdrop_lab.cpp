// airdrop-lab: runs one experiment from a JSON config and prints a summary.
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "airdrop/config_io.hpp"
#include "airdrop/error.hpp"
#include "airdrop/runner.hpp"

namespace {

int report(const std::string& category, const std::string& message, int code) {
  nlohmann::json err = {{"error", category}, {"message", message}, {"exit_code", code}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Airdrop game laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  bool reproducible = false;

  for (const char* name : {"equilibria", "stationary", "simulate", "hitting", "phase", "profit", "times"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed (U64)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--reproducible", reproducible, "omit timestamps, print 17 significant digits");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const airdrop::ExperimentKind kind = airdrop::experiment_kind_from_string(sub->get_name());
    const airdrop::ExperimentConfig config = airdrop::load_config(config_path);
    if (config.kind && *config.kind != kind)
      throw airdrop::InvalidConfig("experiment.kind", "config names '" +
                                                          std::string(airdrop::to_string(*config.kind)) +
                                                          "' but the subcommand is '" + sub->get_name() + "'");
    airdrop::RunOptions options;
    if (out_dir) options.out_dir = *out_dir;
    if (format) options.format = *format == "json" ? airdrop::OutputFormat::json : airdrop::OutputFormat::csv;
    options.seed = seed;
    options.reproducible = reproducible;
    const nlohmann::json summary = airdrop::run_experiment(kind, config, options);
    std::cout << summary.dump(2) << "\n";
    return 0;
  } catch (const airdrop::InvalidConfig& e) {
    nlohmann::json err = {{"error", airdrop::category_name(e.category())},
                          {"field", e.field()},
                          {"message", e.what()},
                          {"exit_code", e.exit_code()}};
    std::cerr << err.dump() << "\n";
    return e.exit_code();
  } catch (const airdrop::Error& e) {
    return report(airdrop::category_name(e.category()), e.what(), e.exit_code());
  } catch (const std::bad_alloc&) {
    return report("resource", "out of memory", 6);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
}
