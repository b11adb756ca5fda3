#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "companion.hpp"
#include "errors.hpp"
#include "stats.hpp"

namespace cksvar {

namespace {

constexpr double kInf = 1e300;

ExampleParam param(std::string name, double def, double lo, double hi, bool lo_open, bool hi_open,
                   std::string range) {
  return {std::move(name), def, lo, hi, lo_open, hi_open, std::move(range)};
}

Mat noise_cov(double s1, double s2, double rho) {
  Mat S(2, 2);
  S << s1 * s1, rho * s1 * s2, rho * s1 * s2, s2 * s2;
  return S;
}

CksvarModel natrate_1a(const ParamMap& P) {
  const double chi = P.at("chi"), psi = P.at("psi"), g = P.at("gamma"), th = P.at("theta"), mu = P.at("mu");
  CksvarModel m = CksvarModel::zeros(2, 1);
  m.phi0_plus << 1.0, 0.0;
  m.phi0_minus << 1.0, th * (1.0 - mu);
  m.Phi0_x << -g, 1.0 - th * g;
  m.phi_plus[0] << psi, 0.0;
  m.phi_minus[0] << psi, 0.0;
  m.Phi_x[0] << -psi * g, chi;
  m.Sigma = noise_cov(P.at("sigma_eta"), P.at("sigma_eps"), P.at("rho"));
  return m;
}

CksvarModel infltarget_1b(const ParamMap& P) {
  const double d = P.at("delta"), g = P.at("gamma"), th = P.at("theta"), mu = P.at("mu");
  const double phi1 = 1.0 - th * g;
  const double phimu = (1.0 - mu * th * g) - th * (1.0 - mu);
  CksvarModel m = CksvarModel::zeros(2, 1);
  m.phi0_plus << -1.0, phi1;
  m.phi0_minus << -1.0, phimu;
  m.Phi0_x << g, -phi1;
  m.phi_plus[0] << d - 1.0, 0.0;
  m.phi_minus[0] << d - 1.0, 0.0;
  m.Phi_x[0] << g - d, 0.0;
  m.Sigma = (g - 1.0) * (g - 1.0) * noise_cov(P.at("sigma_eta"), P.at("sigma_eps"), P.at("rho"));
  return m;
}

constexpr int kTobitMaxLag = 4;

CksvarModel univariate_tobit(const ParamMap& P) {
  const double kd = P.at("k");
  if (kd != std::floor(kd)) throw DimensionError("univariate_tobit: k must be an integer");
  const int k = static_cast<int>(kd);
  CksvarModel m = CksvarModel::zeros(1, k);
  m.phi0_plus << 1.0;
  m.phi0_minus << 1.0;
  m.c << P.at("c");
  for (int i = 1; i <= kTobitMaxLag; ++i) {
    const double fp = P.at("phi" + std::to_string(i) + "_plus"), fm = P.at("phi" + std::to_string(i) + "_minus");
    if (i > k) {
      if (fp != 0.0 || fm != 0.0)
        throw DimensionError("univariate_tobit: phi" + std::to_string(i) + " set beyond lag order k");
      continue;
    }
    m.phi_plus[i - 1] << fp;
    m.phi_minus[i - 1] << fm;
  }
  const double s = P.at("sigma");
  m.Sigma = Mat::Constant(1, 1, s * s);
  return m;
}

std::vector<ExampleFixture> make_registry() {
  std::vector<ExampleFixture> reg;
  auto noise = [](std::vector<ExampleParam>& ps) {
    ps.push_back(param("sigma_eta", 1.0, 0.0, kInf, true, false, "sigma_eta > 0"));
    ps.push_back(param("sigma_eps", 1.0, 0.0, kInf, true, false, "sigma_eps > 0"));
    ps.push_back(param("rho", 0.0, -1.0, 1.0, true, true, "rho in (-1, 1)"));
  };
  {
    ExampleFixture f;
    f.name = "natrate_1a";
    f.description = "policy rate and inflation with an AR(1) natural rate; (y, x) = (i, pi)";
    f.params = {param("chi", 0.0, 0.0, 1.0, false, true, "chi in [0, 1)"),
                param("psi", 1.0, -1.0, 1.0, true, false, "psi in (-1, 1]"),
                param("gamma", 1.5, 0.0, kInf, true, false, "gamma > 0"),
                param("theta", -0.5, -kInf, 0.0, false, true, "theta < 0"),
                param("mu", 0.5, 0.0, 1.0, false, false, "mu in [0, 1]")};
    noise(f.params);
    f.build = natrate_1a;
    reg.push_back(std::move(f));
  }
  {
    ExampleFixture f;
    f.name = "infltarget_1b";
    f.description = "policy rate and inflation with a drifting inflation target; (y, x) = (i, pi)";
    f.params = {param("delta", -0.2, -1.0, 0.0, true, false, "delta in (-1, 0]"),
                param("gamma", 1.5, 1.0, kInf, true, false, "gamma > 1"),
                param("theta", -0.5, -kInf, 0.0, false, true, "theta < 0"),
                param("mu", 0.5, 0.0, 1.0, false, false, "mu in [0, 1]")};
    noise(f.params);
    f.build = infltarget_1b;
    reg.push_back(std::move(f));
  }
  {
    ExampleFixture f;
    f.name = "univariate_tobit";
    f.description = "univariate dynamic Tobit y_t = c + sum(phi_i+ y+_{t-i} + phi_i- y-_{t-i}) + u_t";
    f.params = {param("k", 1.0, 1.0, kTobitMaxLag, false, false, "k integer in [1, 4]"),
                param("c", 0.0, -kInf, kInf, false, false, "c real"),
                param("sigma", 1.0, 0.0, kInf, true, false, "sigma > 0")};
    for (int i = 1; i <= kTobitMaxLag; ++i) {
      const std::string s = std::to_string(i);
      f.params.push_back(param("phi" + s + "_plus", i == 1 ? 1.0 : 0.0, -kInf, kInf, false, false, "real"));
      f.params.push_back(param("phi" + s + "_minus", i == 1 ? 0.5 : 0.0, -kInf, kInf, false, false, "real"));
    }
    f.build = univariate_tobit;
    reg.push_back(std::move(f));
  }
  return reg;
}

}  // namespace

const std::vector<ExampleFixture>& example_registry() {
  static const std::vector<ExampleFixture> reg = make_registry();
  return reg;
}

const ExampleFixture& find_example(const std::string& name) {
  for (const auto& f : example_registry())
    if (f.name == name) return f;
  throw DimensionError("unknown example '" + name + "'");
}

CksvarModel build_example(const std::string& name, const ParamMap& params) {
  const ExampleFixture& f = find_example(name);
  ParamMap full;
  for (const auto& p : f.params) full[p.name] = p.def;
  for (const auto& [key, val] : params) {
    auto it = full.find(key);
    if (it == full.end()) throw DimensionError(name + ": unknown parameter '" + key + "'");
    it->second = val;
  }
  for (const auto& p : f.params) {
    const double v = full[p.name];
    bool ok = std::isfinite(v) && (p.lo_open ? v > p.lo : v >= p.lo) && (p.hi_open ? v < p.hi : v <= p.hi);
    if (!ok) {
      std::ostringstream os;
      os << name << ": " << p.name << " = " << v << " violates " << p.range;
      throw DimensionError(os.str());
    }
  }
  CksvarModel m = f.build(full);
  m.check();
  return m;
}

const char* functional_name(Functional f) {
  switch (f) {
    case Functional::TerminalValue: return "terminal_value";
    case Functional::PathSup: return "path_sup";
    case Functional::OccupationNegative: return "occupation_fraction_negative";
    case Functional::SupAbsYMinus: return "sup_abs_y_minus";
  }
  return "?";
}

Functional functional_from_name(const std::string& s) {
  for (Functional f : {Functional::TerminalValue, Functional::PathSup, Functional::OccupationNegative,
                       Functional::SupAbsYMinus})
    if (s == functional_name(f)) return f;
  throw DimensionError("unknown functional '" + s + "'");
}

void McSpec::check() const {
  model.check();
  if (n_list.empty()) throw DimensionError("McSpec: n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw DimensionError("McSpec: n must be positive");
    if (i && n_list[i] <= n_list[i - 1]) throw DimensionError("McSpec: n_list must be increasing");
  }
  if (reps < 100) throw DimensionError("McSpec: reps must be >= 100");
  if (limit_reps < 0) throw DimensionError("McSpec: limit_reps must be >= 0");
  if (grid < 1) throw DimensionError("McSpec: grid must be >= 1");
  if (z0.size() != 0 && z0.size() != model.p) throw DimensionError("McSpec: z0 must have length p");
  for (int n : growth_n)
    if (n < 4) throw DimensionError("McSpec: growth n must be >= 4");
}

bool McReport::pass() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  for (const auto& g : growth)
    if (!g.pass) return false;
  return true;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  int T = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  T = std::min(T, std::max(count, 1));
  if (T <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < T; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

double functional_of_path(Functional f, const Path& path) {
  const double s = 1.0 / std::sqrt(static_cast<double>(path.n));
  switch (f) {
    case Functional::TerminalValue: return path.y(path.n - 1) * s;
    case Functional::PathSup: return std::max(path.y_at(0), path.y.maxCoeff()) * s;
    case Functional::OccupationNegative: return static_cast<double>((path.y.array() < 0.0).count()) / path.n;
    case Functional::SupAbsYMinus: return path.y_minus.cwiseAbs().maxCoeff() * s;
  }
  return 0.0;
}

double functional_of_limit(Functional f, const LimitPath& lp) {
  const Eigen::Index m1 = lp.Y.size();
  switch (f) {
    case Functional::TerminalValue: return lp.Y(m1 - 1);
    case Functional::PathSup: return lp.Y.maxCoeff();
    case Functional::OccupationNegative:
      // grid points 1..m, matching t = 1..n on the model side
      return static_cast<double>((lp.Y.tail(m1 - 1).array() < 0.0).count()) / (m1 - 1);
    case Functional::SupAbsYMinus: return std::max(0.0, -lp.Y.minCoeff());
  }
  return 0.0;
}

namespace {

Mat diffuse_init(const CksvarModel& m, const Vec& z0, int n) {
  Mat init = zero_init(m.p, m.k);
  if (z0.size()) init.colwise() = std::sqrt(static_cast<double>(n)) * z0;
  return init;
}

// M_{4n}/M_n for |y-| and y+ on one path of length 4n.
struct GrowthPair {
  double minus_ratio, plus_ratio;
};

}  // namespace

McReport run_mc(const McSpec& spec) {
  spec.check();
  using clock = std::chrono::steady_clock;
  McReport rep;
  rep.label = spec.label;
  const CksvarModel& model = spec.model;
  VecmForm v = vecm_decompose(threshold_shift(model));
  rep.classification = classify_case(v);
  const TableConfig cfg = rep.classification.config;
  if (spec.expect && *spec.expect != cfg)
    throw CaseError(std::string("run_mc: expected configuration ") + config_name(*spec.expect) + ", classified " +
                    config_name(cfg));
  if (cfg != TableConfig::CaseI && cfg != TableConfig::CaseII)
    throw CaseError(std::string("run_mc: no limit theory for configuration ") + config_name(cfg));

  AssumptionReport ar = verify_assumptions(model);
  rep.assumptions_ok = ar.all_ok();
  if (!rep.assumptions_ok) {
    rep.warnings.push_back("assumption verification did not certify every condition; results are indicative");
    for (const auto& m : ar.messages) rep.warnings.push_back(m);
    for (const auto& c : ar.case_specific)
      if (!c.pass) rep.warnings.push_back(c.name + ": " + c.detail);
  }

  std::vector<Functional> fs = spec.functionals;
  if (fs.empty()) {
    fs = {Functional::TerminalValue, Functional::PathSup};
    fs.push_back(cfg == TableConfig::CaseI ? Functional::SupAbsYMinus : Functional::OccupationNegative);
  }

  const Vec z0 = spec.z0.size() ? spec.z0 : Vec::Zero(model.p);
  const int lreps = spec.limit_reps > 0 ? spec.limit_reps : spec.reps;

  // Limit sample: one set shared across n.
  auto t0 = clock::now();
  std::vector<std::vector<double>> lim(fs.size(), std::vector<double>(lreps));
  const std::uint64_t lseed = mix_seed(spec.seed, 0x4c494d4954ULL);
  parallel_for(lreps, spec.threads, [&](int r) {
    BrownianGrid U = brownian_grid(model.Sigma, spec.grid, mix_seed(lseed, r));
    LimitPath lp = cfg == TableConfig::CaseI ? limit_case1(v, z0, U) : limit_case2(v, z0, U);
    for (std::size_t j = 0; j < fs.size(); ++j) lim[j][r] = functional_of_limit(fs[j], lp);
  });
  rep.seconds_limit = std::chrono::duration<double>(clock::now() - t0).count();

  t0 = clock::now();
  for (int n : spec.n_list) {
    std::vector<std::vector<double>> mod(fs.size(), std::vector<double>(spec.reps));
    const std::uint64_t nseed = mix_seed(spec.seed, static_cast<std::uint64_t>(n));
    Mat init = diffuse_init(model, spec.z0, n);
    parallel_for(spec.reps, spec.threads, [&](int r) {
      InnovationSpec is;
      is.Sigma = model.Sigma;
      is.seed = mix_seed(nseed, r);
      Path path = simulate(model, n, is, init);
      for (std::size_t j = 0; j < fs.size(); ++j) mod[j][r] = functional_of_path(fs[j], path);
    });
    for (std::size_t j = 0; j < fs.size(); ++j) {
      FunctionalResult fr;
      fr.functional = fs[j];
      fr.n = n;
      fr.model_sample = std::move(mod[j]);
      fr.limit_sample = lim[j];
      fr.ks = ks_two_sample(fr.model_sample, fr.limit_sample);
      fr.model_median = median(fr.model_sample);
      fr.limit_median = median(fr.limit_sample);
      const bool case1 = cfg == TableConfig::CaseI;
      if (case1 && fs[j] == Functional::SupAbsYMinus) {
        fr.threshold = kThresholds.y_minus_median;
        fr.pass = fr.model_median < fr.threshold;
        fr.criterion = "median < threshold";
      } else if (case1 && fs[j] == Functional::OccupationNegative) {
        fr.threshold = kThresholds.occupation_case1;
        fr.pass = fr.model_median < fr.threshold;
        fr.criterion = "median < threshold";
      } else {
        fr.threshold = kThresholds.ks_slack * ks_critical(kThresholds.ks_alpha, fr.model_sample.size(),
                                                          fr.limit_sample.size());
        fr.pass = fr.ks < fr.threshold;
        fr.criterion = "ks < threshold";
      }
      rep.results.push_back(std::move(fr));
    }
  }

  for (int n : spec.growth_n) {
    std::vector<GrowthPair> gp(spec.reps);
    const std::uint64_t gseed = mix_seed(spec.seed ^ 0x47524f57ULL, static_cast<std::uint64_t>(n));
    Mat init = diffuse_init(model, spec.z0, n);
    parallel_for(spec.reps, spec.threads, [&](int r) {
      InnovationSpec is;
      is.Sigma = model.Sigma;
      is.seed = mix_seed(gseed, r);
      Path path = simulate(model, 4 * n, is, init);
      double m1 = path.y_minus.head(n).cwiseAbs().maxCoeff(), m4 = path.y_minus.cwiseAbs().maxCoeff();
      double p1 = path.y_plus.head(n).maxCoeff(), p4 = path.y_plus.maxCoeff();
      gp[r] = {m1 > 0.0 ? m4 / m1 : 1.0, p1 > 0.0 ? p4 / p1 : 1.0};
    });
    std::vector<double> rm, rp;
    for (const auto& g : gp) {
      rm.push_back(g.minus_ratio);
      rp.push_back(g.plus_ratio);
    }
    if (cfg == TableConfig::CaseI) {
      GrowthResult g;
      g.series = "y_minus";
      g.n = n;
      g.median_ratio = median(rm);
      g.lo = 0.0;
      g.hi = kThresholds.growth_minus_hi;
      g.pass = g.median_ratio < g.hi;
      rep.growth.push_back(g);
    }
    GrowthResult g;
    g.series = "y_plus";
    g.n = n;
    g.median_ratio = median(rp);
    g.lo = kThresholds.growth_plus_lo;
    g.hi = kThresholds.growth_plus_hi;
    g.pass = g.median_ratio >= g.lo && g.median_ratio <= g.hi;
    rep.growth.push_back(g);
  }
  rep.seconds_model = std::chrono::duration<double>(clock::now() - t0).count();
  return rep;
}

ResidualReport residual_check(const Path& path, const VecmForm& v, const CaseClassification& cls, double threshold) {
  if (cls.config != TableConfig::CaseI && cls.config != TableConfig::CaseII)
    throw CaseError("residual_check: requires case (i) or case (ii)");
  if (path.p != v.p) throw DimensionError("residual_check: path and model dimensions differ");
  Mat bp, bm;
  if (cls.config == TableConfig::CaseII) {
    KinkGeometry g = kink_geometry(v, cls.tolerance_used);
    bp = g.beta_plus;
    bm = g.beta_minus;
  } else {
    bp = factorize_pi(v.Pi(+1), cls.r_plus, cls.tolerance_used).beta;
    if (cls.r_minus < v.p) bm = factorize_pi(v.Pi(-1), cls.r_minus, cls.tolerance_used).beta;
  }
  const int n = path.n, quarter = std::max(1, n / 4);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  ResidualReport rep;
  auto add = [&](const Mat& beta, int regime, int region) {
    if (beta.cols() == 0) return;
    ResidualEntry e;
    e.regime = regime;
    e.region = region;
    e.name = std::string(regime > 0 ? "beta+" : "beta-") + " on " + (region > 0 ? "Z+" : "Z-");
    double full = 0.0, early = 0.0;
    for (int t = 1; t <= n; ++t) {
      const double y = path.y_at(t) - path.b;
      if ((region > 0) != (y >= 0.0)) continue;
      ++e.count;
      double val = (beta.transpose() * path.z(t)).cwiseAbs().maxCoeff();
      full = std::max(full, val);
      if (t <= quarter) early = std::max(early, val);
    }
    e.scaled_max = full * s;
    e.growth_ratio = early > 0.0 ? full / early : (full > 0.0 ? kInf : 1.0);
    e.i0 = e.count > 0 && e.scaled_max < threshold && e.growth_ratio < kThresholds.growth_minus_hi;
    rep.entries.push_back(e);
  };
  add(bp, +1, +1);
  add(bm, -1, -1);
  add(bp, +1, -1);
  add(bm, -1, +1);
  return rep;
}

}  // namespace cksvar
