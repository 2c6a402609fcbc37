#ifndef AIRDROP_RUNNER_HPP
#define AIRDROP_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "airdrop/config_io.hpp"

namespace airdrop {

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides the config
  std::optional<OutputFormat> format;            // overrides the config
  std::optional<std::uint64_t> seed;             // overrides the config
  bool reproducible = false;                     // no timestamps, 17 significant digits
};

// Runs one experiment, writes its artifacts and returns the summary that the
// CLI prints on standard output.
nlohmann::json run_experiment(ExperimentKind kind, const ExperimentConfig& config, const RunOptions& options);

// Cells are empty, integers, reals or text.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> comments;  // emitted as leading "# ..." lines in CSV
};

// Locale-independent shortest round-trip text, or 17 significant digits.
std::string format_double(double x, bool fixed_precision);

std::string to_csv(const Table& table, bool fixed_precision);
nlohmann::json to_json_rows(const Table& table);

}  // namespace airdrop

#endif  // AIRDROP_RUNNER_HPP
