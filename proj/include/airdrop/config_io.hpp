#ifndef AIRDROP_CONFIG_IO_HPP
#define AIRDROP_CONFIG_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "airdrop/model.hpp"

namespace airdrop {

enum class ExperimentKind { equilibria, stationary, simulate, hitting, phase, profit, times };
enum class OutputFormat { csv, json };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);
bool is_stochastic(ExperimentKind kind);

struct ExperimentConfig {
  GameConfig game;
  std::optional<ExperimentKind> kind;  // from the document, if it names one
  nlohmann::json params = nlohmann::json::object();  // the "experiment" block
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::csv;
  std::optional<std::uint64_t> seed;
  nlohmann::json document;  // the resolved document, used for the config hash
};

// Parses and validates; throws Error with category parse (bad JSON), schema
// (missing field or wrong type) or invalid_config (value out of range).
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

GameConfig game_config_from_json(const nlohmann::json& doc);
nlohmann::json game_config_to_json(const GameConfig& config);

// FNV-1a over the canonical (key-sorted, compact) serialization, as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

}  // namespace airdrop

#endif  // AIRDROP_CONFIG_IO_HPP
