#pragma once

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace horo::harness {

// Flat key = value experiment configuration. '#' starts a comment, blank
// lines are skipped, unknown keys are rejected so typos surface instead of
// silently running defaults.
struct ExperimentConfig {
  // Shared.
  int rank = 2;
  std::string action = "none";  // none | trivial | finite_model | so3_sphere |
                                // sanov_plane | boundary_pair
  std::string mode = "ball";    // ball | exploratory-sphere

  // ratio-converge.
  int samples = 20;
  int n_min = 0;
  int n_max = 8;
  std::string u = "a1:1";
  std::string v = "e:1";
  std::string u_xfactor = "none";
  std::string v_xfactor = "none";

  // counterexample-j.
  int pairs = 100;
  int moves = 20;
  int window = 6;
  int move_len_max = 6;

  // audit.
  int audit_models = 1000;
  int audit_t = 8;
  int audit_triples = 10000;
  int model_max_size = 64;

  static ExperimentConfig load(const std::string& path);
};

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' needs an integer, got '" + value + "'");
  }
}
}  // namespace detail

inline ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) + " is not key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));

    if (key == "rank") cfg.rank = detail::to_int(key, value);
    else if (key == "action") cfg.action = value;
    else if (key == "mode") cfg.mode = value;
    else if (key == "samples") cfg.samples = detail::to_int(key, value);
    else if (key == "n_min") cfg.n_min = detail::to_int(key, value);
    else if (key == "n_max") cfg.n_max = detail::to_int(key, value);
    else if (key == "u") cfg.u = value;
    else if (key == "v") cfg.v = value;
    else if (key == "u_xfactor") cfg.u_xfactor = value;
    else if (key == "v_xfactor") cfg.v_xfactor = value;
    else if (key == "pairs") cfg.pairs = detail::to_int(key, value);
    else if (key == "moves") cfg.moves = detail::to_int(key, value);
    else if (key == "window") cfg.window = detail::to_int(key, value);
    else if (key == "move_len_max") cfg.move_len_max = detail::to_int(key, value);
    else if (key == "audit_models") cfg.audit_models = detail::to_int(key, value);
    else if (key == "audit_t") cfg.audit_t = detail::to_int(key, value);
    else if (key == "audit_triples") cfg.audit_triples = detail::to_int(key, value);
    else if (key == "model_max_size") cfg.model_max_size = detail::to_int(key, value);
    else throw std::runtime_error("config: unknown key '" + key + "'");
  }
  if (cfg.rank < 2) throw std::runtime_error("config: rank must be >= 2");
  if (cfg.mode != "ball" && cfg.mode != "exploratory-sphere")
    throw std::runtime_error("config: mode must be ball or exploratory-sphere");
  if (cfg.n_min < 0 || cfg.n_max < cfg.n_min)
    throw std::runtime_error("config: need 0 <= n_min <= n_max");
  return cfg;
}

}  // namespace horo::harness
