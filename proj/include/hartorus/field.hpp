#pragma once

#include "hartorus/arbprec.hpp"
#include "hartorus/basis.hpp"
#include "hartorus/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hartorus {

struct LaplaceSolution;
struct SteklovCandidate;

/// Values on a grid_n x grid_n grid of the centred fundamental cell; points
/// inside a hole carry no value.
struct FieldGrid {
  std::size_t n = 0;
  std::vector<Complex> points;
  std::vector<std::optional<Real>> values;
};

FieldGrid sample_field(const Domain& domain, std::size_t grid_n,
                       const std::function<Real(const Complex&)>& f);

FieldGrid export_field(const LaplaceSolution& sol, std::size_t grid_n);
FieldGrid export_eigenfunction(const BasisSpec& spec, const SteklovCandidate& candidate,
                               std::size_t grid_n);

/// "x,y,u" CSV; hole points emit the token nan.
std::string field_csv(const FieldGrid& grid, int digits = 20);

/// Writes via a temporary file and rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace hartorus
