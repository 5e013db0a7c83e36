#include "commands.hpp"

#include "hartorus/elliptic.hpp"
#include "hartorus/field.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

namespace hartorus::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string dec(const Real& x) { return x.to_string(); }
ordered_json dec(const Complex& z) { return ordered_json::array({z.re.to_string(), z.im.to_string()}); }

std::string out_path(const JobConfig& job, const std::string& name) {
  return (std::filesystem::path(job.output_dir) / name).string();
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

LaplaceOptions laplace_options(const JobConfig& job, int k_max) {
  LaplaceOptions o;
  o.k_max = k_max;
  o.oversample = job.oversample;
  o.column_scaling = job.column_scaling;
  o.method = job.method;
  return o;
}

const BoundaryData& require_data(const JobConfig& job) {
  if (!job.boundary_data) throw ValidationError("this job needs boundary_data");
  return *job.boundary_data;
}

const SteklovConfig& require_steklov(const JobConfig& job) {
  if (!job.steklov) throw ValidationError("this job needs a steklov block");
  return *job.steklov;
}

ordered_json coefficients_json(const BasisSpec& spec, const CoefficientVector& v) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    out.push_back({{"slot", spec.slot_name(i)}, {"value", dec(v.values[i])}});
  }
  return out;
}

// cond2 of B^t B and B^t A on the fitting samples, with the same column
// scaling the solve uses.
std::pair<Real, Real> gram_conditions(const Domain& domain, int k_max, double oversample, bool scaling) {
  const Precision p = domain.precision();
  const BasisSpec spec(domain, k_max);
  const BasisEvaluator basis(spec);
  const std::size_t m = spec.size();
  const auto total = static_cast<std::size_t>(std::ceil(oversample * static_cast<double>(m)));
  const auto samples = sample_boundary(domain, total);
  SteklovSystem sys{DenseMatrix(samples.size(), m, p), DenseMatrix(samples.size(), m, p), DenseMatrix(1, m, p),
                    Vector(m, Real(1L, p))};
  std::vector<Real> values, normals;
  for (std::size_t l = 0; l < samples.size(); ++l) {
    basis.values_and_normals(samples[l], values, normals);
    std::move(values.begin(), values.end(), sys.b.row(l));
    std::move(normals.begin(), normals.end(), sys.a.row(l));
  }
  if (scaling) scale_columns(sys);
  return {condition_report(gram(sys.b)).cond2, condition_report(cross_gram(sys.b, sys.a)).cond2};
}

std::string error_status(const std::exception& e) {
  std::string msg = e.what();
  for (char& c : msg) {
    if (c == ',' || c == '\n' || c == '"') c = ';';
  }
  return "failed: " + msg;
}

}  // namespace

void cmd_invariants(const JobConfig& job, std::ostream& out) {
  const Lattice& l = *job.lattice;
  ordered_json r;
  r["config"] = ordered_json::parse(job.resolved.dump());
  r["omega1"] = dec(l.omega1());
  r["omega2"] = dec(l.omega2());
  r["tau"] = dec(l.tau());
  r["g2"] = dec(l.g2());
  r["g3"] = dec(l.g3());
  r["gamma2"] = dec(l.gamma2());
  r["eta1"] = dec(l.eta1());
  r["eta2"] = dec(l.eta2());
  r["area"] = dec(l.area());
  r["legendre_residual"] = l.legendre_residual().to_string(6);
  r["tolerance"] = l.tolerance().to_string(6);
  out << dump(r);
}

void cmd_laplace(const JobConfig& job, std::ostream& out) {
  const LaplaceSolution sol = solve_laplace(*job.domain, require_data(job), laplace_options(job, job.k_max));
  ordered_json r;
  r["config"] = ordered_json::parse(job.resolved.dump());
  r["m"] = sol.spec.size();
  r["k_max"] = job.k_max;
  r["samples"] = sol.samples_used;
  r["samples_check"] = sol.samples_check;
  r["boundary_sup_error"] = sol.boundary_sup_error.to_string(10);
  r["fit_sup_error"] = sol.fit_sup_error.to_string(10);
  r["sup_error_note"] =
      "boundary_sup_error is measured on samples_check points, fit_sup_error on the samples used for the fit; "
      "both are sampled maxima, not rigorous bounds";
  r["coefficients"] = coefficients_json(sol.spec, sol.coefficients);
  write_file_atomic(out_path(job, "report.json"), dump(r));
  if (job.grid_n > 0) write_file_atomic(out_path(job, "field.csv"), field_csv(export_field(sol, job.grid_n)));
  out << "m=" << sol.spec.size() << " S=" << sol.samples_used
      << " boundary_sup_error=" << sol.boundary_sup_error.to_string(6) << "\n";
}

void cmd_steklov(const JobConfig& job, std::ostream& out) {
  const SteklovConfig& cfg = require_steklov(job);
  const SteklovResult res = solve_steklov(*job.domain, cfg);
  const BasisSpec spec(*job.domain, cfg.k_max);
  ordered_json r;
  r["config"] = ordered_json::parse(job.resolved.dump());
  r["m"] = res.basis_size;
  r["k_max"] = cfg.k_max;
  r["samples"] = res.samples;
  r["samples_check"] = res.samples_check;
  r["interior_rank"] = res.interior_rank;
  if (!res.diagnostic.empty()) r["diagnostic"] = res.diagnostic;
  r["residual_note"] =
      "residual_l2 is the boundary L2 norm of d_n u - sigma u for the L2-normalized eigenfunction; "
      "the eigenvalue error is bounded by an unknown domain constant times this value";
  ordered_json cands = ordered_json::array();
  std::string scan_csv = "sigma,s\n";
  for (const auto& pt : res.scan) scan_csv += pt.sigma.to_string(20) + "," + pt.s.to_string(20) + "\n";
  for (std::size_t i = 0; i < res.candidates.size(); ++i) {
    const SteklovCandidate& c = res.candidates[i];
    cands.push_back({{"index", i + 1},
                     {"sigma", dec(c.sigma)},
                     {"s_value", c.s_value.to_string(10)},
                     {"s_second", c.s_second.to_string(10)},
                     {"residual_l2", c.residual_l2.to_string(10)},
                     {"multiplicity_flag", c.multiple},
                     {"branch", c.branch},
                     {"bracket", {dec(c.bracket_lo), dec(c.bracket_hi)}},
                     {"coefficients", coefficients_json(spec, c.coefficients)}});
    if (job.grid_n > 0 && i < job.eigenfunctions) {
      write_file_atomic(out_path(job, "eigenfunction_" + std::to_string(i + 1) + ".csv"),
                        field_csv(export_eigenfunction(spec, c, job.grid_n)));
    }
  }
  r["candidates"] = std::move(cands);
  write_file_atomic(out_path(job, "scan.csv"), scan_csv);
  write_file_atomic(out_path(job, "report.json"), dump(r));
  for (std::size_t i = 0; i < res.candidates.size(); ++i) {
    const SteklovCandidate& c = res.candidates[i];
    out << "sigma_" << i + 1 << " = " << c.sigma.to_string(40) << "  residual " << c.residual_l2.to_string(3)
        << (c.multiple ? "  (multiple)" : "") << "\n";
  }
}

bool cmd_convergence(const JobConfig& job, std::ostream& out) {
  const bool steklov = job.sweep.problem == "steklov";
  if (job.sweep.k_max.empty()) throw ValidationError("convergence needs a sweep block with k_max values");
  if (steklov) {
    require_steklov(job);
  } else {
    require_data(job);
  }
  const bool cond = job.sweep.condition;
  std::string csv = steklov ? "k_max,m,index,sigma,residual_l2" : "k_max,m,sup_error,fit_sup_error";
  if (cond) csv += ",cond_BtB,cond_BtA";
  csv += ",status\n";
  bool any_ok = false;
  for (int k : job.sweep.k_max) {
    const std::string m = std::to_string(basis_size(job.domain->hole_count(), k));
    std::string cond_cols;
    try {
      if (cond) {
        const auto [c1, c2] = gram_conditions(*job.domain, k, job.oversample, job.column_scaling);
        cond_cols = "," + c1.to_string(10) + "," + c2.to_string(10);
      }
      if (steklov) {
        SteklovConfig cfg = *job.steklov;
        cfg.k_max = k;
        const SteklovResult res = solve_steklov(*job.domain, cfg);
        const std::size_t n = std::min(job.sweep.candidates, res.candidates.size());
        for (std::size_t i = 0; i < n; ++i) {
          const SteklovCandidate& c = res.candidates[i];
          csv += std::to_string(k) + "," + m + "," + std::to_string(i + 1) + "," + c.sigma.to_string(40) + "," +
                 c.residual_l2.to_string(10) + cond_cols + ",ok\n";
        }
        if (n == 0) throw std::runtime_error("no candidates in the scan range");
        any_ok = true;
      } else {
        const LaplaceSolution sol = solve_laplace(*job.domain, *job.boundary_data, laplace_options(job, k));
        csv += std::to_string(k) + "," + m + "," + sol.boundary_sup_error.to_string(10) + "," +
               sol.fit_sup_error.to_string(10) + cond_cols + ",ok\n";
        any_ok = true;
      }
    } catch (const std::exception& e) {
      csv += std::to_string(k) + "," + m + (steklov ? ",,,," : ",,,") + (cond ? ",," : "") + error_status(e) + "\n";
    }
    out << "k_max=" << k << " done\n";
  }
  write_file_atomic(out_path(job, "convergence.csv"), csv);
  return any_ok;
}

int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConditioningError& e) {
    err << "conditioning error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const RankDeficiencyError& e) {
    err << "rank deficiency: " << e.what() << "\n";
    return kNumerical;
  } catch (const ReductionError& e) {
    err << "pencil reduction failed: " << e.what() << "\n";
    return kNumerical;
  } catch (const DegenerateError& e) {
    err << "degenerate pencil: " << e.what() << "\n";
    return kNumerical;
  } catch (const NotPositiveDefiniteError& e) {
    err << "factorization failed: " << e.what() << "\n";
    return kNumerical;
  } catch (const PoleError& e) {
    err << "pole: " << e.what() << "\n";
    return kNumerical;
  } catch (const DomainError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kOther;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonic functions and Steklov eigenvalues on multiply connected flat tori"};
  app.require_subcommand(1);
  std::string config;
  Overrides ov;
  long bits = 0;
  int kmax = -1;
  std::size_t grid = 0;
  std::string out_dir;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON job config")->required();
    sub->add_option("--bits", bits, "override precision_bits");
    sub->add_option("--kmax", kmax, "override k_max");
    sub->add_option("--grid", grid, "override grid_n");
    sub->add_option("--out", out_dir, "override output_dir");
    return sub;
  };
  CLI::App* inv = add("invariants", "print lattice invariants as JSON");
  CLI::App* lap = add("laplace", "solve a Dirichlet problem");
  CLI::App* stk = add("steklov", "compute Steklov eigenvalues");
  CLI::App* conv = add("convergence", "sweep k_max and write convergence.csv");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kValidation;
  }
  for (CLI::App* sub : {inv, lap, stk, conv}) {
    if (sub->count("--bits")) ov.bits = bits;
    if (sub->count("--kmax")) ov.k_max = kmax;
    if (sub->count("--grid")) ov.grid_n = grid;
    if (sub->count("--out")) ov.output_dir = out_dir;
  }
  try {
    const JobConfig job = load_job(config, ov, !inv->parsed());
    if (inv->parsed()) {
      cmd_invariants(job, out);
    } else if (lap->parsed()) {
      cmd_laplace(job, out);
    } else if (stk->parsed()) {
      cmd_steklov(job, out);
    } else if (!cmd_convergence(job, out)) {
      err << "every sweep row failed\n";
      return kNumerical;
    }
  } catch (...) {
    return report_exception(err);
  }
  return kOk;
}

}  // namespace hartorus::cli
