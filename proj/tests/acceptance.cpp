// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Optional arguments select criteria by substring of their names.

#include "hartorus/elliptic.hpp"
#include "hartorus/laplace.hpp"
#include "hartorus/linalg.hpp"
#include "hartorus/steklov.hpp"

#include "job_config.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace hartorus;
using namespace hartorus::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string sci(const Real& x) { return x.to_string(3); }

// Worst err/tol ratio seen by one identity.
struct Worst {
  const char* name;
  double ratio = 0;
  explicit Worst(const char* n) : name(n) {}
  void add(const Real& err, const Real& tol) { ratio = std::max(ratio, (err / tol).to_double()); }
};

Domain one_circle(const Lattice& l, const Real& r) { return one_hole(l, r); }

FourierSeries sin_mode(int k, Precision p) {
  FourierSeries f{Real(p), {}, std::vector<Real>(static_cast<std::size_t>(k), Real(p))};
  f.sin.back() = Real(1L, p);
  return f;
}

SteklovConfig steklov_settings(Precision p, int k_max, const char* hi, const char* tol) {
  SteklovConfig c(p);
  c.k_max = k_max;
  c.sigma_lo = Real(p);
  c.sigma_hi = Real::parse(hi, p);
  c.step = Real::parse("0.05", p);
  c.tol = Real::parse(tol, p);
  return c;
}

Real rel_err(const Real& x, const Real& ref) { return abs(x - ref) / abs(ref); }

// ---------------------------------------------------------------------------

void lattice_suite(Outcome& out) {
  for (long bits : {256L, 1024L}) {
    const Precision p(bits);
    Rng rng(1000 + static_cast<std::uint64_t>(bits));
    std::vector<Lattice> ls{Lattice::square(p), Lattice::equilateral(p)};
    for (int i = 0; i < 10; ++i) ls.push_back(random_lattice(rng, p));
    Real worst(p);
    for (const Lattice& l : ls) {
      const Real r = l.legendre_residual();
      out.require(r < l.tolerance(), "Legendre residual at " + std::to_string(bits) + " bits");
      worst = max(worst, r);
    }
    const Lattice sq = Lattice::square(p);
    const Lattice eq = Lattice::equilateral(p);
    out.require(abs(sq.g3()) < sq.tolerance(), "g3(square)");
    out.require(abs(eq.g2()) < eq.tolerance(), "g2(equilateral)");
    out.detail << bits << " bits: max Legendre residual " << sci(worst) << " (tol " << sci(sq.tolerance())
               << "), |g3(square)| " << sci(abs(sq.g3())) << ", |g2(equilateral)| " << sci(abs(eq.g2())) << "; ";
  }
}

void elliptic_suite(Outcome& out) {
  const Precision p(256);
  Rng rng(2024);
  const Lattice l = random_lattice(rng, p);
  const EllipticEvaluator ev(l);
  const Real one(1L, p);
  const Real tight = Real::exp2i(-p.bits() + 64, p);
  const Real h = Real::exp2i(-p.bits() / 4, p);
  const Complex dx(h, Real(p));
  const Complex dy(Real(p), h);
  const Complex w1 = ldexp(l.omega1(), 1);
  const Complex w2 = ldexp(l.omega2(), 1);
  const Real lap_target = -ldexp(Real::pi(p), 1) / l.area();

  Worst ode("ODE"), dzeta("zeta'=-wp"), dsigma("sigma'/sigma=zeta"), parity("parity"), period("periodicity"),
      laurent("Laurent"), lap("Laplacian");
  for (int i = 0; i < 100; ++i) {
    const Complex z = away_from_poles(rng, l, 0.1);
    const auto d = ev.wp_derivs(z, 10);
    const Complex& wp = d[0];
    // O(h^2) finite differences; the scale covers the third derivative
    const Real fd_tol = Real::exp2i(-p.bits() / 2 + 8, p) * (one + abs(d[2]) + abs(wp));

    const Complex res = square(d[1]) - Complex(4, 0, p) * wp * square(wp) + l.g2() * wp + l.g3();
    ode.add(abs(res), tight * (abs(wp) * norm(wp) + abs(l.g2()) * abs(wp) + abs(l.g3()) + one));

    const Complex zeta = ev.zeta(z);
    dzeta.add(abs((ev.zeta(z + dx) - ev.zeta(z - dx)) / ldexp(h, 1) + wp), fd_tol);
    const Complex ds = (ev.sigma(z + dx) - ev.sigma(z - dx)) / ldexp(h, 1);
    dsigma.add(abs(ds / ev.sigma(z) - zeta), fd_tol * (one + abs(zeta)));

    parity.add(abs(ev.wp(-z) - wp), tight * (abs(wp) + one));
    parity.add(abs(ev.wp_prime(-z) + d[1]), tight * (abs(d[1]) + one));
    parity.add(abs(ev.zeta(-z) + zeta), tight * (abs(zeta) + one));
    parity.add(abs(ev.sigma(-z) + ev.sigma(z)), tight * (abs(ev.sigma(z)) + one));
    parity.add(abs(ev.log_abs_sigma_hat(-z) - ev.log_abs_sigma_hat(z)), tight);

    const Complex zh = ev.zeta_hat(z);
    const Real ls = ev.log_abs_sigma_hat(z);
    for (const Complex& shift : {w1, w2, w1 - w2}) {
      const auto e = ev.wp_derivs(z + shift, 10);
      for (int k = 0; k <= 10; ++k) period.add(abs(e[k] - d[k]), tight * (abs(d[k]) + one));
      period.add(abs(ev.zeta_hat(z + shift) - zh), tight * (abs(zh) + one));
      period.add(abs(ev.log_abs_sigma_hat(z + shift) - ls), tight);
    }

    const Real l5 = (ev.log_abs_sigma_hat(z + dx) + ev.log_abs_sigma_hat(z - dx) + ev.log_abs_sigma_hat(z + dy) +
                     ev.log_abs_sigma_hat(z - dy) - ls * 4L) /
                    square(h);
    lap.add(abs(l5 - lap_target), fd_tol * 16L);

    const Real rmax = min(abs(l.omega1()), abs(l.omega2())) * Real(0.3, p);
    const Complex zl = polar(rmax * rng.real(0.05, 1.0, p), rng.real(-3.14, 3.14, p));
    const LaurentValue lv = laurent_wp(l, zl);
    laurent.add(abs(ev.wp(zl) - lv.value), abs(lv.value) * Real::exp2i(-p.bits() + 32, p) + lv.last_term * 4L);
  }
  out.detail << "100 points at 256 bits, worst err/tol:";
  for (const Worst* w : {&ode, &dzeta, &dsigma, &parity, &period, &laurent, &lap}) {
    out.require(w->ratio < 1, w->name);
    char buf[64];
    std::snprintf(buf, sizeof buf, " %s %.2g", w->name, w->ratio);
    out.detail << buf;
  }
}

void laplace_desk(Outcome& out) {
  const Precision p(512);
  const Domain d = one_circle(Lattice::square(p), Real::parse("0.4", p));
  LaplaceOptions o;
  o.k_max = 60;
  const LaplaceSolution s = solve_laplace(d, BoundaryData{{sin_mode(5, p)}}, o);
  out.require(s.boundary_sup_error < Real::parse("1e-40", p), "sup error < 1e-40");
  out.detail << "512 bits, k_max 60, m " << s.spec.size() << ": sup error " << sci(s.boundary_sup_error)
             << " (fit samples " << sci(s.fit_sup_error) << ")";
}

void laplace_extended(Outcome& out) {
  const Precision p(1024);
  const Domain d = one_circle(Lattice::square(p), Real::parse("0.4", p));
  LaplaceOptions o;
  o.k_max = 150;
  const LaplaceSolution s = solve_laplace(d, BoundaryData{{sin_mode(5, p)}}, o);
  out.require(s.spec.size() == 305, "m = 305");
  out.require(s.boundary_sup_error < Real::parse("1e-100", p), "sup error < 1e-100");
  out.detail << "1024 bits, k_max 150, m " << s.spec.size() << ": sup error " << sci(s.boundary_sup_error);
}

// Checks candidates against reference values (index 0 is sigma_1 = 0) and
// expected multiplicity flags.
void check_spectrum(Outcome& out, const SteklovResult& r, const std::vector<const char*>& ref,
                    const std::vector<bool>& multiple, const char* digits) {
  const Precision p = r.candidates.empty() ? Precision(64) : r.candidates.front().sigma.precision();
  out.require(r.candidates.size() == ref.size() + 1,
              std::to_string(ref.size() + 1) + " candidates, got " + std::to_string(r.candidates.size()));
  if (r.candidates.size() < ref.size() + 1) return;
  Real worst(p);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const Real e = rel_err(r.candidates[i + 1].sigma, Real::parse(ref[i], p));
    worst = max(worst, e);
    out.require(e < Real::parse(digits, p), "sigma_" + std::to_string(i + 2));
  }
  std::string flags;
  for (std::size_t i = 0; i < multiple.size(); ++i) {
    const bool m = r.candidates[i].multiple;
    flags += m ? 'D' : 'S';
    out.require(m == multiple[i], "multiplicity of sigma_" + std::to_string(i + 1));
  }
  out.detail << "max relative error " << sci(worst) << ", |sigma_1| " << sci(abs(r.candidates[0].sigma))
             << ", flags " << flags << " (D double, S simple)";
}

void steklov_square(Outcome& out) {
  const Precision p(512);
  const Domain d = one_circle(Lattice::square(p), binary64("0.4", p));
  const SteklovResult r = solve_steklov(d, steklov_settings(p, 60, "7.6", "1e-40"));
  check_spectrum(out, r,
                 {"3.21737540790552735473880286001400036767774798208487",
                  "3.21737540790552735473880286001400036767774798208487",
                  "4.85099530552467697892257589130439715581461931719259",
                  "5.15358084940676223549771471754234765157435969419525",
                  "7.50305008416767542642635086056165243882709526430554",
                  "7.50305008416767542642635086056165243882709526430554"},
                 {false, true, true, false, false, true, true}, "1e-25");
}

void steklov_equilateral(Outcome& out) {
  const Precision p(512);
  const Domain d = one_circle(Lattice::equilateral(p), binary64("0.4", p));
  const SteklovResult r = solve_steklov(d, steklov_settings(p, 60, "7.6", "1e-40"));
  check_spectrum(out, r,
                 {"3.34865594380260534169550288243470971962587318064277",
                  "3.34865594380260534169550288243470971962587318064277",
                  "4.99978881548382813234141616969113198885117552416465",
                  "4.99978881548382813234141616969113198885117552416465",
                  "7.44392530690947308002824485738760008901145380307620",
                  "7.55649710043624518482844840631875099119732734059433"},
                 {false, true, true, true, true, false, false}, "1e-25");
}

void spot_check(Outcome& out, const Domain& d, const char* hi, const char* sigma2) {
  const Precision p = d.precision();
  const SteklovResult r = solve_steklov(d, steklov_settings(p, 60, hi, "1e-40"));
  out.require(r.candidates.size() >= 2, "at least two candidates");
  if (r.candidates.size() < 2) return;
  const Real e = rel_err(r.candidates[1].sigma, Real::parse(sigma2, p));
  out.require(e < Real::parse("1e-20", p), "sigma_2 to 20 digits");
  bool simple = true;
  for (const auto& c : r.candidates) simple = simple && !c.multiple;
  out.require(simple, "all candidates simple");
  out.detail << "sigma_2 " << r.candidates[1].sigma.to_string(30) << ", relative error " << sci(e) << ", "
             << r.candidates.size() << " candidates in [0, " << hi << "], all simple: " << (simple ? "yes" : "no");
}

void steklov_two_holes(Outcome& out) {
  const Precision p(512);
  const Real r = binary64("0.1", p);
  const Domain d(Lattice::square(p), {Hole(Complex(binary64("0.2", p), Real(p)), Circle{r}),
                                      Hole(Complex(binary64("-0.2", p), binary64("0.2", p)), Circle{r})});
  spot_check(out, d, "6.6", "6.45837308842285506198400983365912091999317179119988");
}

void steklov_three_holes(Outcome& out) {
  const Precision p(512);
  const Real r = binary64("0.1", p);
  const Domain d(Lattice::square(p), {Hole(Complex(binary64("0.3", p), Real(p)), Circle{r}),
                                      Hole(Complex(Real(p), binary64("0.3", p)), Circle{r}),
                                      Hole(Complex(binary64("-0.3", p), binary64("-0.3", p)),
                                           Circle{binary64("0.05", p)})});
  spot_check(out, d, "6.6", "6.54721983775026738598476089606442586801693676638247");
}

void laplace_convergence(Outcome& out) {
  const Precision p(512);
  const Domain d = one_circle(Lattice::square(p), Real::parse("0.4", p));
  std::vector<double> xs, ys;
  for (int k = 10; k <= 60; k += 5) {
    LaplaceOptions o;
    o.k_max = k;
    const LaplaceSolution s = solve_laplace(d, BoundaryData{{sin_mode(5, p)}}, o);
    xs.push_back(static_cast<double>(s.spec.size()));
    ys.push_back(std::log10(s.boundary_sup_error.to_double()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = sxy * sxy / (sxx * syy);
  out.require(slope < 0, "negative slope");
  out.require(r2 > 0.95, "R^2 > 0.95");
  char buf[160];
  std::snprintf(buf, sizeof buf, "k_max 10..60 step 5: log10 sup error vs m slope %.4f, R^2 %.4f, last %.2f", slope,
                r2, ys.back());
  out.detail << buf;
}

void steklov_convergence(Outcome& out) {
  // Same precision and tolerance as the table runs. At 256 bits the Gram route
  // resolves sigma_1 = 0 only to ~1e-28 once k_max >= 30, and that floor, not
  // discretization, would dominate the first residual.
  const Precision p(512);
  const Domain d = one_circle(Lattice::square(p), binary64("0.4", p));
  std::vector<std::vector<Real>> res;
  for (int k : {20, 30, 40}) {
    const SteklovResult r = solve_steklov(d, steklov_settings(p, k, "7.6", "1e-40"));
    out.require(r.candidates.size() >= 7, "7 candidates at k_max " + std::to_string(k));
    if (r.candidates.size() < 7) return;
    std::vector<Real> row;
    for (std::size_t i = 0; i < 7; ++i) row.push_back(r.candidates[i].residual_l2);
    res.push_back(std::move(row));
  }
  out.detail << "residual_l2 at k_max 20/30/40:";
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 1; j < res.size(); ++j) {
      out.require(res[j][i] <= res[j - 1][i] * 2L, "candidate " + std::to_string(i + 1) + " monotone");
    }
    out.detail << " #" << i + 1 << " " << sci(res[0][i]) << "/" << sci(res[1][i]) << "/" << sci(res[2][i]);
  }
}

void scaling_invariance(Outcome& out) {
  const Precision p(256);
  const Real half = Real::exp2i(-p.bits() / 2, p);
  const Domain d(Lattice::square(p), {Hole(Complex(binary64("0.3", p), Real(p)), Circle{binary64("0.1", p)}),
                                      Hole(Complex(Real(p), binary64("0.3", p)), Circle{binary64("0.1", p)}),
                                      Hole(Complex(binary64("-0.3", p), binary64("-0.3", p)),
                                           Circle{binary64("0.05", p)})});
  const BasisSpec spec(d, 8);
  const BasisEvaluator basis(spec);
  const SteklovSystem raw =
      assemble_steklov(basis, sample_boundary(d, 3 * spec.size()), random_interior_points(d, 50, 1));
  SteklovSystem scaled = raw;
  scale_columns(scaled);
  const SteklovPencil a(raw, PencilRoute::Gram);
  const SteklovPencil b(scaled, PencilRoute::Gram);
  Rng rng(31);
  Real worst_s(p);
  for (int i = 0; i < 10; ++i) {
    const Real sigma = rng.real(0.5, 15, p);
    const Real sa = a.s(sigma);
    worst_s = max(worst_s, abs(sa - b.s(sigma)) / sa);
  }
  out.require(worst_s < half, "s(sigma) under column scaling");

  const BoundaryData data{{sin_mode(4, p), sin_mode(3, p), sin_mode(2, p)}};
  LaplaceOptions on;
  on.k_max = 10;
  LaplaceOptions off = on;
  off.column_scaling = false;
  const LaplaceSolution u = solve_laplace(d, data, on);
  const LaplaceSolution v = solve_laplace(d, data, off);
  Real worst_u(p);
  for (const auto& s : sample_boundary(d, 60)) {
    worst_u = max(worst_u, abs(eval_solution(u, s.point) - eval_solution(v, s.point)));
  }
  out.require(worst_u < half, "boundary values under column scaling");
  out.detail << "s(sigma) relative change " << sci(worst_s) << ", boundary values change " << sci(worst_u)
             << " (tol " << sci(half) << ")";
}

// Independent reduced-space computation: eigenbasis of G = C^t C splits R^m
// into range and kernel, the kernel block of D is eliminated by a Schur
// complement, and the remaining pencil is whitened by the range eigenvalues.
Real reduced_space_oracle(const DenseMatrix& d, const DenseMatrix& c) {
  const Precision p = d.precision();
  const std::size_t m = d.rows();
  const SymmetricEigen eg = jacobi_eigen(gram(c));
  const Real thr = eg.values.back() * Real::exp2i(-p.bits() / 2, p);
  std::size_t k = 0;  // kernel dimension; eigenvalues ascend
  while (k < m && eg.values[k] < thr) ++k;
  const std::size_t r = m - k;
  const DenseMatrix dq = eg.vectors.transpose() * d * eg.vectors;
  DenseMatrix s = dq.block(k, k, r, r);
  if (k > 0) {
    const DenseMatrix l22 = cholesky(dq.block(0, 0, k, k));
    const DenseMatrix d21 = dq.block(0, k, k, r);
    std::vector<Vector> y;
    for (std::size_t j = 0; j < r; ++j) y.push_back(solve_lower(l22, d21.column(j)));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) s(i, j) -= dot(y[i], y[j]);
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) s(i, j) /= sqrt(eg.values[k + i] * eg.values[k + j]);
  return jacobi_eigen(s).values.front();
}

void pencil_oracle(Outcome& out) {
  const Precision p(256);
  const Real half = Real::exp2i(-p.bits() / 2, p);
  Rng rng(77);
  Real worst(p);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = static_cast<std::size_t>(6 + trial % 9);
    const std::size_t rank = 1 + static_cast<std::size_t>(rng.uniform(0, static_cast<double>(m - 1)));
    const std::size_t rows = rank + static_cast<std::size_t>(rng.uniform(0, 4));
    const DenseMatrix dm = gram(random_matrix(rng, m + 5, m, p));
    const DenseMatrix cm = random_matrix(rng, rows, rank, p) * random_matrix(rng, rank, m, p);
    const Real got = smallest_genpair(dm, cm).s();
    const Real want = reduced_space_oracle(dm, cm);
    const Real e = abs(got - want) / (abs(want) + 1L);
    worst = max(worst, e);
    out.require(e < half, "pencil " + std::to_string(trial));
  }
  out.detail << "20 pencils with rank(C) < m: max relative difference " << sci(worst) << " (tol " << sci(half) << ")";
}

void twenty_five_disks(Outcome& out) {
  const cli::JobConfig job = cli::load_job(HARTORUS_CONFIG_DIR "/twenty_five_disks.json", {}, true);
  LaplaceOptions o;
  o.k_max = job.k_max;
  o.oversample = job.oversample;
  o.column_scaling = job.column_scaling;
  o.method = job.method;
  const LaplaceSolution s = solve_laplace(*job.domain, *job.boundary_data, o);
  out.require(job.precision.bits() == 256, "256 bits");
  out.require(s.boundary_sup_error < Real::parse("1e-16", job.precision), "sup error < 1e-16");
  out.detail << job.domain->hole_count() << " disks, " << job.precision.bits() << " bits, k_max " << job.k_max
             << ", m " << s.spec.size() << ": sup error " << sci(s.boundary_sup_error);
}

struct Criterion {
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"lattice suite", lattice_suite},
      {"elliptic identity suite", elliptic_suite},
      {"laplace desk run", laplace_desk},
      {"laplace extended run", laplace_extended},
      {"steklov square one hole table", steklov_square},
      {"steklov equilateral one hole table", steklov_equilateral},
      {"steklov two holes sigma_2", steklov_two_holes},
      {"steklov three holes sigma_2", steklov_three_holes},
      {"laplace convergence", laplace_convergence},
      {"steklov residual convergence", steklov_convergence},
      {"column scaling invariance", scaling_invariance},
      {"pencil reduction oracle", pencil_oracle},
      {"twenty-five disk field", twenty_five_disks},
  };
  int failed = 0;
  int ran = 0;
  for (const Criterion& c : all) {
    if (argc > 1) {
      bool hit = false;
      for (int i = 1; i < argc; ++i) hit = hit || std::string(c.name).find(argv[i]) != std::string::npos;
      if (!hit) continue;
    }
    ++ran;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    char t[32];
    std::snprintf(t, sizeof t, "%.1f s", secs);
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail.str() << " [" << t << "]" << std::endl;
  }
  std::cout << ran - failed << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
