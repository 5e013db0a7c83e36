#include "hartorus/field.hpp"

#include "hartorus/laplace.hpp"
#include "hartorus/steklov.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hartorus {

FieldGrid sample_field(const Domain& domain, std::size_t grid_n,
                       const std::function<Real(const Complex&)>& f) {
  FieldGrid out;
  out.n = grid_n;
  out.points = cell_grid(domain.lattice(), grid_n);
  out.values.reserve(out.points.size());
  for (const Complex& z : out.points) {
    if (contains(domain, z)) {
      out.values.emplace_back(f(z));
    } else {
      out.values.emplace_back(std::nullopt);
    }
  }
  return out;
}

FieldGrid export_field(const LaplaceSolution& sol, std::size_t grid_n) {
  const BasisEvaluator basis(sol.spec);
  return sample_field(sol.spec.domain(), grid_n,
                      [&](const Complex& z) { return evaluate_expansion(basis, sol.coefficients, z); });
}

FieldGrid export_eigenfunction(const BasisSpec& spec, const SteklovCandidate& candidate,
                               std::size_t grid_n) {
  const BasisEvaluator basis(spec);
  return sample_field(spec.domain(), grid_n, [&](const Complex& z) {
    return evaluate_expansion(basis, candidate.coefficients, z);
  });
}

std::string field_csv(const FieldGrid& grid, int digits) {
  std::string out = "x,y,u\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    out += grid.points[i].re.to_string(digits);
    out += ',';
    out += grid.points[i].im.to_string(digits);
    out += ',';
    out += grid.values[i] ? grid.values[i]->to_string(digits) : std::string("nan");
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << contents;
    os.flush();
    if (!os) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

}  // namespace hartorus
