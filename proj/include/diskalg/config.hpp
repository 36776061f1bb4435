#pragma once

// JSON experiment configuration.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diskalg/approx.hpp"
#include "diskalg/geometry.hpp"

namespace diskalg {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double zero_tol = 1e-9;
  double sign_tol = 1e-9;
  double newton_tol = 1e-13;
  double separation_tol = 1e-6;
};

struct Config {
  std::string name;
  GeneratorSpec spec;
  std::optional<BiPoly> certificate;
  std::optional<BiPoly> certificate2;

  GridSpec grid;
  int margin_samples = 4096;
  std::vector<double> verify_radii{1e-1, 1e-2, 1e-3};
  int verify_n_theta = 256;
  std::vector<double> residual_radii{0.1, 0.05, 0.025};
  int residual_n_theta = 64;
  double kallin_radius = 0.05;
  int kallin_n_r = 4;
  int kallin_n_theta = 64;

  std::vector<int> degrees{2, 4, 6, 8};
  std::vector<Target> targets;
  Tolerances tol;
  double cap = 1.0;
  double ridge = 1e-12;
  int lawson_iters = 0;
  std::filesystem::path output = "out";
};

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

}  // namespace diskalg
