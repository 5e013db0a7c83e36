#include "job_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace hartorus::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

class RealReader {
 public:
  RealReader(Precision p, bool binary64) : p_(p), binary64_(binary64) {}

  Real operator()(const json& v, const std::string& where) const {
    if (!v.is_string()) {
      throw ValidationError(where + " must be a decimal string (got " + std::string(v.type_name()) + ")");
    }
    const std::string text = v.get<std::string>();
    Real exact(p_);
    try {
      exact = Real::parse(text, p_);
    } catch (const ParseError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!binary64_) return exact;
    return Real(std::strtod(text.c_str(), nullptr), p_);
  }

  Complex pair(const json& v, const std::string& where) const {
    if (!v.is_array() || v.size() != 2) throw ValidationError(where + " must be [re, im]");
    return Complex((*this)(v[0], where + "[0]"), (*this)(v[1], where + "[1]"));
  }

  std::vector<Real> list(const json& v, const std::string& where) const {
    if (!v.is_array()) throw ValidationError(where + " must be an array of decimal strings");
    std::vector<Real> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back((*this)(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  Precision p_;
  bool binary64_;
};

long get_int(const json& obj, const char* key, long fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + "." + key + " must be an integer");
  return v.get<long>();
}

Real pi_fraction(const std::string& text, Precision p, const std::string& where) {
  const auto slash = text.find('/');
  try {
    const std::string num = text.substr(0, slash);
    const Real pi = Real::pi(p);
    Real out = Real::parse(num, p) * pi;
    if (slash != std::string::npos) out /= Real::parse(text.substr(slash + 1), p);
    return out;
  } catch (const std::exception& e) {
    throw ValidationError(where + ": expected \"p\" or \"p/q\", " + e.what());
  }
}

Lattice parse_lattice(const json& v, Precision p, const RealReader& rd) {
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    if (name == "square") return Lattice::square(p);
    if (name == "equilateral") return Lattice::equilateral(p);
    throw ValidationError("unknown lattice preset '" + name + "' (square, equilateral)");
  }
  check_keys(v, "lattice", {"omega1", "omega2"});
  if (!v.contains("omega1") || !v.contains("omega2")) throw ValidationError("lattice needs omega1 and omega2");
  return Lattice(rd.pair(v.at("omega1"), "lattice.omega1"), rd.pair(v.at("omega2"), "lattice.omega2"), p);
}

Hole parse_hole(const json& h, std::size_t j, Precision p, const RealReader& rd) {
  const std::string where = "holes[" + std::to_string(j) + "]";
  check_keys(h, where, {"center", "shape"});
  if (!h.contains("center") || !h.contains("shape")) throw ValidationError(where + " needs center and shape");
  Complex center = rd.pair(h.at("center"), where + ".center");
  const json& s = h.at("shape");
  const std::string sw = where + ".shape";
  if (!s.is_object() || !s.contains("type")) throw ValidationError(sw + " needs a type");
  const std::string type = s.at("type").get<std::string>();
  if (type == "circle") {
    check_keys(s, sw, {"type", "radius"});
    if (!s.contains("radius")) throw ValidationError(sw + " needs radius");
    return Hole(std::move(center), Circle{rd(s.at("radius"), sw + ".radius")});
  }
  if (type == "polar") {
    check_keys(s, sw, {"type", "rho_cos", "phase", "phase_pi"});
    if (!s.contains("rho_cos")) throw ValidationError(sw + " needs rho_cos");
    if (s.contains("phase") && s.contains("phase_pi")) throw ValidationError(sw + ": give phase or phase_pi, not both");
    Real phase(p);
    if (s.contains("phase")) phase = rd(s.at("phase"), sw + ".phase");
    if (s.contains("phase_pi")) {
      if (!s.at("phase_pi").is_string()) throw ValidationError(sw + ".phase_pi must be a string");
      phase = pi_fraction(s.at("phase_pi").get<std::string>(), p, sw + ".phase_pi");
    }
    return Hole(std::move(center), PolarCurve{rd.list(s.at("rho_cos"), sw + ".rho_cos"), std::move(phase)});
  }
  throw ValidationError(sw + ": unknown type '" + type + "' (circle, polar)");
}

}  // namespace

namespace {

JobConfig parse_job_impl(const json& doc_in, const Overrides& ov, bool need_domain) {
  json doc = doc_in;
  check_keys(doc, "config",
             {"precision_bits", "input_rounding", "lattice", "holes", "boundary_data", "k_max", "oversample",
              "grid_n", "output_dir", "seed", "column_scaling", "least_squares", "steklov", "sweep"});
  if (ov.bits) doc["precision_bits"] = *ov.bits;
  if (ov.k_max) doc["k_max"] = *ov.k_max;
  if (ov.grid_n) doc["grid_n"] = *ov.grid_n;
  if (ov.output_dir) doc["output_dir"] = *ov.output_dir;

  const long bits = get_int(doc, "precision_bits", Precision::kDefaultBits, "config");
  if (bits < Precision::kMinBits) {
    throw ValidationError("precision_bits must be >= " + std::to_string(Precision::kMinBits));
  }
  doc["precision_bits"] = bits;
  const Precision p(bits);

  const std::string rounding = doc.value("input_rounding", std::string("exact"));
  if (rounding != "exact" && rounding != "binary64") {
    throw ValidationError("input_rounding must be \"exact\" or \"binary64\"");
  }
  doc["input_rounding"] = rounding;
  const RealReader rd(p, rounding == "binary64");

  JobConfig job{p, std::nullopt, std::nullopt, std::nullopt, 60, 3.0, 0, "out", 1, true,
                LeastSquaresMethod::Householder, std::nullopt, 7, {}, {}};

  if (!doc.contains("lattice")) throw ValidationError("config needs a lattice");
  try {
    job.lattice = parse_lattice(doc.at("lattice"), p, rd);
  } catch (const GeometryError& e) {
    throw ValidationError(std::string("lattice: ") + e.what());
  } catch (const ConditioningError& e) {
    throw ValidationError(std::string("lattice: ") + e.what());
  }

  job.k_max = static_cast<int>(get_int(doc, "k_max", 60, "config"));
  if (job.k_max < 0 || job.k_max >= EllipticEvaluator::kDerivativeCap) {
    throw ValidationError("k_max out of range");
  }
  doc["k_max"] = job.k_max;
  if (doc.contains("oversample")) {
    job.oversample = rd(doc.at("oversample"), "oversample").to_double();
    if (!(job.oversample >= 1.0)) throw ValidationError("oversample must be >= 1");
  } else {
    doc["oversample"] = "3";
  }
  const long grid = get_int(doc, "grid_n", 0, "config");
  if (grid != 0 && grid < 2) throw ValidationError("grid_n must be 0 (no export) or >= 2");
  job.grid_n = static_cast<std::size_t>(grid);
  doc["grid_n"] = grid;
  if (doc.contains("output_dir") && !doc.at("output_dir").is_string()) {
    throw ValidationError("output_dir must be a string");
  }
  job.output_dir = doc.value("output_dir", std::string("out"));
  doc["output_dir"] = job.output_dir;
  const long seed = get_int(doc, "seed", 1, "config");
  if (seed < 0) throw ValidationError("seed must be non-negative");
  job.seed = static_cast<std::uint64_t>(seed);
  doc["seed"] = seed;
  if (doc.contains("column_scaling") && !doc.at("column_scaling").is_boolean()) {
    throw ValidationError("column_scaling must be a boolean");
  }
  job.column_scaling = doc.value("column_scaling", true);
  doc["column_scaling"] = job.column_scaling;
  const std::string ls = doc.value("least_squares", std::string("householder"));
  if (ls == "householder") {
    job.method = LeastSquaresMethod::Householder;
  } else if (ls == "normal_equations") {
    job.method = LeastSquaresMethod::NormalEquations;
  } else {
    throw ValidationError("least_squares must be \"householder\" or \"normal_equations\"");
  }
  doc["least_squares"] = ls;

  if (need_domain) {
    if (!doc.contains("holes") || !doc.at("holes").is_array() || doc.at("holes").empty()) {
      throw ValidationError("config needs a non-empty holes array");
    }
    std::vector<Hole> holes;
    try {
      for (std::size_t j = 0; j < doc.at("holes").size(); ++j) {
        holes.push_back(parse_hole(doc.at("holes")[j], j, p, rd));
      }
      job.domain.emplace(*job.lattice, std::move(holes));
    } catch (const GeometryError& e) {
      throw ValidationError(std::string("domain: ") + e.what());
    }
    const std::size_t b = job.domain->hole_count();
    const std::size_t m = basis_size(b, job.k_max);
    if (static_cast<double>(m) * job.oversample < 8.0 * static_cast<double>(b)) {
      throw ValidationError("too few boundary samples for the number of holes");
    }
  }

  if (doc.contains("boundary_data")) {
    const json& bd = doc.at("boundary_data");
    if (!bd.is_array()) throw ValidationError("boundary_data must be an array (one entry per hole)");
    if (job.domain && bd.size() != job.domain->hole_count()) {
      throw ValidationError("boundary_data has " + std::to_string(bd.size()) + " entries for " +
                            std::to_string(job.domain->hole_count()) + " holes");
    }
    BoundaryData data;
    for (std::size_t j = 0; j < bd.size(); ++j) {
      const std::string where = "boundary_data[" + std::to_string(j) + "]";
      check_keys(bd[j], where, {"a0", "cos", "sin"});
      FourierSeries f{bd[j].contains("a0") ? rd(bd[j].at("a0"), where + ".a0") : Real(p), {}, {}};
      if (bd[j].contains("cos")) f.cos = rd.list(bd[j].at("cos"), where + ".cos");
      if (bd[j].contains("sin")) f.sin = rd.list(bd[j].at("sin"), where + ".sin");
      data.holes.push_back(std::move(f));
    }
    job.boundary_data = std::move(data);
  }

  if (doc.contains("steklov")) {
    json& st = doc["steklov"];
    check_keys(st, "steklov", {"interior_R", "sigma_lo", "sigma_hi", "step", "tol", "route", "eigenfunctions"});
    SteklovConfig cfg(p);
    cfg.k_max = job.k_max;
    cfg.seed = job.seed;
    cfg.oversample = job.oversample;
    cfg.column_scaling = job.column_scaling;
    const long r = get_int(st, "interior_R", 50, "steklov");
    if (r < 1) throw ValidationError("steklov.interior_R must be >= 1");
    cfg.interior_R = static_cast<std::size_t>(r);
    st["interior_R"] = r;
    // Reals keep full precision regardless of input_rounding: they are
    // solver controls, not geometry.
    const RealReader exact(p, false);
    auto real_field = [&](const char* key, Real& target, const char* fallback) {
      if (st.contains(key)) {
        target = exact(st.at(key), std::string("steklov.") + key);
      } else {
        st[key] = fallback;
      }
    };
    real_field("sigma_lo", cfg.sigma_lo, "0");
    real_field("sigma_hi", cfg.sigma_hi, "25");
    real_field("step", cfg.step, "0.05");
    real_field("tol", cfg.tol, "1e-40");
    const std::string route = st.value("route", std::string("gram"));
    if (route == "gram") {
      cfg.route = PencilRoute::Gram;
    } else if (route == "factored") {
      cfg.route = PencilRoute::Factored;
    } else {
      throw ValidationError("steklov.route must be \"gram\" or \"factored\"");
    }
    st["route"] = route;
    const long ef = get_int(st, "eigenfunctions", 7, "steklov");
    if (ef < 0) throw ValidationError("steklov.eigenfunctions must be >= 0");
    job.eigenfunctions = static_cast<std::size_t>(ef);
    st["eigenfunctions"] = ef;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("steklov: ") + e.what());
    }
    job.steklov = std::move(cfg);
  }

  if (doc.contains("sweep")) {
    json& sw = doc["sweep"];
    check_keys(sw, "sweep", {"problem", "k_max", "condition", "candidates"});
    job.sweep.problem = sw.value("problem", std::string("laplace"));
    if (job.sweep.problem != "laplace" && job.sweep.problem != "steklov") {
      throw ValidationError("sweep.problem must be \"laplace\" or \"steklov\"");
    }
    sw["problem"] = job.sweep.problem;
    if (!sw.contains("k_max") || !sw.at("k_max").is_array() || sw.at("k_max").empty()) {
      throw ValidationError("sweep.k_max must be a non-empty array of integers");
    }
    for (const auto& k : sw.at("k_max")) {
      if (!k.is_number_integer() || k.get<long>() < 0 || k.get<long>() >= EllipticEvaluator::kDerivativeCap) {
        throw ValidationError("sweep.k_max entries must be integers in range");
      }
      const int kv = k.get<int>();
      if (!job.sweep.k_max.empty() && kv <= job.sweep.k_max.back()) {
        throw ValidationError("sweep.k_max must be strictly increasing");
      }
      job.sweep.k_max.push_back(kv);
    }
    if (sw.contains("condition") && !sw.at("condition").is_boolean()) {
      throw ValidationError("sweep.condition must be a boolean");
    }
    job.sweep.condition = sw.value("condition", false);
    sw["condition"] = job.sweep.condition;
    const long cands = get_int(sw, "candidates", 7, "sweep");
    if (cands < 1) throw ValidationError("sweep.candidates must be >= 1");
    job.sweep.candidates = static_cast<std::size_t>(cands);
    sw["candidates"] = cands;
  }

  job.resolved = std::move(doc);
  return job;
}

}  // namespace

JobConfig parse_job(const json& doc, const Overrides& overrides, bool need_domain) {
  try {
    return parse_job_impl(doc, overrides, need_domain);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  } catch (const PrecisionMismatch& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

JobConfig load_job(const std::string& path, const Overrides& overrides, bool need_domain) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot read config " + path);
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_job(doc, overrides, need_domain);
}

}  // namespace hartorus::cli
