#include "airdrop/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "airdrop/error.hpp"

namespace airdrop {

namespace {

using nlohmann::json;

constexpr std::string_view kExperimentNames[] = {"equilibria", "stationary", "simulate", "hitting",
                                                 "phase",      "profit",     "times"};

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCategory::schema, field + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) schema_error(field, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) {
    if (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())))
      return static_cast<int>(v.get<double>());
    schema_error(field, "expected an integer");
  }
  return v.get<int>();
}

std::vector<double> as_numbers(const json& v, const std::string& field) {
  if (!v.is_array()) schema_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_number(v[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

double number_or(const json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, key);
}

TechnologySpec technology_from_json(const json& t) {
  const std::string path = "technology";
  const json& kind_v = require(t, "kind", path);
  if (!kind_v.is_string()) schema_error("technology.kind", "expected a string");
  const std::string kind = kind_v.get<std::string>();
  const std::string pp = "technology.params";
  auto params = t.find("params");
  const json empty = json::object();
  const json& p = params == t.end() ? empty : *params;
  if (!p.is_object()) schema_error(pp, "expected an object");

  auto num = [&](const char* key) { return as_number(require(p, key, pp), join(pp, key)); };
  if (kind == "threshold") {
    TechnologySpec s = TechnologySpec::threshold(0, num("v_low"), num("v_high"));
    s.tau = num("tau");  // integrality is an invariant, checked by Technology
    return s;
  }
  if (kind == "linear") return TechnologySpec::linear(num("lambda_v"));
  if (kind == "quadratic") return TechnologySpec::quadratic(num("tau"));
  if (kind == "sshaped") return TechnologySpec::sshaped(num("tau"), num("c"));
  if (kind == "concave") return TechnologySpec::concave(num("tau"), num("c"));
  if (kind == "table") return TechnologySpec::from_table(as_numbers(require(p, "table", pp), join(pp, "table")));
  schema_error("technology.kind", "unsupported kind '" + kind + "'");
}

json technology_to_json(const TechnologySpec& s) {
  json p;
  switch (s.kind) {
    case TechnologyKind::threshold:
      p = {{"tau", s.tau}, {"v_low", s.v_low}, {"v_high", s.v_high}};
      break;
    case TechnologyKind::linear:
      p = {{"lambda_v", s.lambda_v}};
      break;
    case TechnologyKind::quadratic:
      p = {{"tau", s.tau}};
      break;
    case TechnologyKind::sshaped:
    case TechnologyKind::concave:
      p = {{"tau", s.tau}, {"c", s.c}};
      break;
    case TechnologyKind::table:
      p = {{"table", s.table}};
      break;
    case TechnologyKind::general:
      throw Unsupported("general technologies have no JSON form");
  }
  return {{"kind", std::string(to_string(s.kind))}, {"params", p}};
}

}  // namespace

std::string_view to_string(ExperimentKind kind) { return kExperimentNames[static_cast<int>(kind)]; }

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (int k = 0; k < 7; ++k)
    if (kExperimentNames[k] == name) return static_cast<ExperimentKind>(k);
  schema_error("experiment.kind", "unknown experiment '" + std::string(name) + "'");
}

bool is_stochastic(ExperimentKind kind) {
  return kind == ExperimentKind::simulate || kind == ExperimentKind::hitting;
}

GameConfig game_config_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("", "top level must be an object");
  GameConfig c;
  c.n = as_int(require(doc, "n", ""), "n");
  if (c.n < 1) throw InvalidConfig("n", "must be >= 1");

  const bool has_alpha = doc.contains("alpha"), has_costs = doc.contains("costs");
  if (has_alpha == has_costs) schema_error("costs", "give exactly one of 'alpha' or 'costs'");
  if (has_alpha) {
    c.costs.assign(static_cast<std::size_t>(c.n), as_number(doc["alpha"], "alpha"));
  } else if (doc["costs"].is_number()) {
    c.costs.assign(static_cast<std::size_t>(c.n), doc["costs"].get<double>());
  } else {
    c.costs = as_numbers(doc["costs"], "costs");
  }
  c.rho = as_number(require(doc, "rho", ""), "rho");
  c.t_tot = number_or(doc, "t_tot", 1.0);
  c.beta = number_or(doc, "beta", 0.0);
  c.d_v = number_or(doc, "d_v", 0.0);
  c.technology = technology_from_json(require(doc, "technology", ""));

  if (auto it = doc.find("actions"); it != doc.end()) {
    if (!it->is_array() || it->empty()) schema_error("actions", "expected a nonempty array");
    if ((*it)[0].is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i)
        c.actions.push_back(as_numbers((*it)[i], "actions[" + std::to_string(i) + "]"));
    } else {
      c.actions.push_back(as_numbers(*it, "actions"));
    }
  }
  return c;
}

json game_config_to_json(const GameConfig& c) {
  json j = {{"n", c.n},       {"costs", c.costs}, {"rho", c.rho},
            {"t_tot", c.t_tot}, {"beta", c.beta}, {"d_v", c.d_v},
            {"technology", technology_to_json(c.technology)}};
  if (!c.actions.empty()) j["actions"] = c.actions;
  return j;
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  cfg.game = game_config_from_json(doc);
  Game validated(cfg.game);  // surfaces invariant violations now
  cfg.game = validated.config();

  if (auto it = doc.find("experiment"); it != doc.end()) {
    if (!it->is_object()) schema_error("experiment", "expected an object");
    cfg.params = *it;
    if (auto k = it->find("kind"); k != it->end()) {
      if (!k->is_string()) schema_error("experiment.kind", "expected a string");
      cfg.kind = experiment_kind_from_string(k->get<std::string>());
    }
    if (auto s = it->find("seed"); s != it->end()) {
      if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
        schema_error("experiment.seed", "expected an unsigned integer");
      cfg.seed = s->get<std::uint64_t>();
    }
  }
  if (auto it = doc.find("output"); it != doc.end()) {
    if (!it->is_object()) schema_error("output", "expected an object");
    if (auto d = it->find("dir"); d != it->end()) {
      if (!d->is_string()) schema_error("output.dir", "expected a string");
      cfg.out_dir = d->get<std::string>();
    }
    if (auto f = it->find("format"); f != it->end()) {
      if (!f->is_string()) schema_error("output.format", "expected a string");
      const auto s = f->get<std::string>();
      if (s == "csv")
        cfg.format = OutputFormat::csv;
      else if (s == "json")
        cfg.format = OutputFormat::json;
      else
        throw InvalidConfig("output.format", "must be 'csv' or 'json'");
    }
  }
  cfg.document = doc;
  return cfg;
}

ExperimentConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCategory::parse, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace airdrop
