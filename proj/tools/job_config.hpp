#pragma once

#include "hartorus/geometry.hpp"
#include "hartorus/laplace.hpp"
#include "hartorus/lattice.hpp"
#include "hartorus/steklov.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hartorus::cli {

/// Malformed or inconsistent job configuration (exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<long> bits;
  std::optional<int> k_max;
  std::optional<std::size_t> grid_n;
  std::optional<std::string> output_dir;
};

struct SweepConfig {
  std::string problem = "laplace";  // or "steklov"
  std::vector<int> k_max;
  bool condition = false;
  std::size_t candidates = 7;
};

/// A fully resolved job. `resolved` is the config as JSON after defaults and
/// overrides, embedded verbatim in every report.
struct JobConfig {
  Precision precision;
  std::optional<Lattice> lattice;
  std::optional<Domain> domain;
  std::optional<BoundaryData> boundary_data;
  int k_max = 60;
  double oversample = 3.0;
  std::size_t grid_n = 0;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  bool column_scaling = true;
  LeastSquaresMethod method = LeastSquaresMethod::Householder;
  std::optional<SteklovConfig> steklov;
  std::size_t eigenfunctions = 7;
  SweepConfig sweep;
  nlohmann::json resolved;
};

/// Parses and validates; `need_domain` is false for lattice-only jobs.
JobConfig parse_job(const nlohmann::json& doc, const Overrides& overrides, bool need_domain);
JobConfig load_job(const std::string& path, const Overrides& overrides, bool need_domain);

}  // namespace hartorus::cli
