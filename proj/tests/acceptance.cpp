// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "companion.hpp"
#include "fixtures.hpp"
#include "harness.hpp"
#include "jsr.hpp"
#include "limit.hpp"
#include "model.hpp"
#include "simulation.hpp"
#include "stats.hpp"
#include "vecm.hpp"

using namespace cksvar;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Mat canonical_init(const CanonicalModel& cm, const Mat& init) {
  const int p = cm.model.p;
  Mat out(p, init.cols());
  for (int j = 0; j < init.cols(); ++j) {
    Vec s(p + 1);
    s << std::max(init(0, j), 0.0), std::min(init(0, j), 0.0), init.col(j).tail(p - 1);
    Vec t = cm.P_inv * s;
    out(0, j) = t(0) + t(1);
    out.col(j).tail(p - 1) = t.tail(p - 1);
  }
  return out;
}

Outcome c1_canonical_paths() {
  std::mt19937_64 rng(101);
  double worst = 0.0, scale = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 1 + rep % 4, k = 1 + rep % 3;
    CksvarModel m = fx::random_coherent(rng, p, k);
    // Explosive draws overflow within 1000 steps; keep both regimes at most unit-root.
    while (spectral_radius(companion_matrix(m, +1)) > 1.0 || spectral_radius(companion_matrix(m, -1)) > 1.0)
      m = fx::random_coherent(rng, p, k);
    CanonicalModel cm = to_canonical(m);
    Mat u = chol_lower(m.Sigma, "u") * fx::randn(rng, p, 1000);
    Mat init = fx::randn(rng, p, k);
    Path a = simulate(m, u, init);
    Path b = simulate(cm, cm.Q * u, canonical_init(cm, init));
    for (int t = 0; t < a.n; ++t) {
      Vec s(p + 1), got(p + 1);
      s << a.y_plus(t), a.y_minus(t), a.x.col(t);
      got << b.y_plus(t), b.y_minus(t), b.x.col(t);
      Vec want = cm.P_inv * s;
      worst = std::max(worst, (want - got).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff()));
      scale = std::max(scale, want.cwiseAbs().maxCoeff());
    }
  }
  return {worst < 1e-9, "max deviation " + fmt("%.3g", worst) + " (< 1e-9, relative to max(1, |z|)), largest |z| " +
                            fmt("%.3g", scale)};
}

Outcome c2_natrate_canonical() {
  const double chi = 0.3, psi = 0.9, g = 1.5, th = -0.5, mu = 0.5;
  CksvarModel m = build_example("natrate_1a", {{"chi", chi}, {"psi", psi}, {"gamma", g}, {"theta", th}, {"mu", mu}});
  CanonicalModel cm = to_canonical(m);
  const double k1 = 1.0 / (1.0 - th * g), kmu = 1.0 / (1.0 - mu * th * g);
  const double tau = g * th * (1.0 - mu) * k1;
  Mat lag(2, 3), Pinv(3, 3), Q(2, 2);
  lag << psi, psi - chi * tau * kmu, g * (chi * k1 - psi) * k1, 0.0, -chi * th * (1.0 - mu) * kmu, chi * k1;
  Pinv << 1, 0, 0, 0, 1 + tau, 0, 0, th * (1 - mu), 1 - th * g;
  Q << 1, g * k1, 0, 1;
  double err = max_abs(cm.model.lag_full(1) - lag);
  err = std::max(err, max_abs(cm.P_inv - Pinv));
  err = std::max(err, max_abs(cm.Q - Q));
  err = std::max(err, max_abs(cm.model.Phi0_full() - canonical_phi0(2)));
  return {err < 1e-12, "max entry error " + fmt("%.3g", err) + " (< 1e-12)"};
}

Outcome c3_short_memory() {
  std::mt19937_64 rng(303);
  double worst1 = 0.0, worst2 = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    CanonicalModel cm = to_canonical(fx::random_case1(rng, 1 + rep % 3, 1 + rep % 3));
    VecmForm v = vecm_decompose(cm);
    Mat u = chol_lower(cm.model.Sigma, "u") * fx::randn(rng, cm.model.p, 10000);
    Path path = simulate(cm, u, zero_init(cm.model.p, cm.model.k));
    Case1Trace tr = short_memory_case1(v, path);
    const double scale = 1.0 + path.y.cwiseAbs().maxCoeff();
    worst1 = std::max(worst1, (tr.y_minus - path.y_minus).cwiseAbs().maxCoeff() / scale);
  }
  for (int rep = 0; rep < 20; ++rep) {
    CanonicalModel cm = to_canonical(fx::random_case2(rng, 2 + rep % 3, 1 + rep % 3));
    VecmForm v = vecm_decompose(cm);
    Mat u = chol_lower(cm.model.Sigma, "u") * fx::randn(rng, cm.model.p, 10000);
    Path path = simulate(cm, u, zero_init(cm.model.p, cm.model.k));
    Case2Trace tr = short_memory_case2(v, path);
    worst2 = std::max(worst2, max_abs(tr.xi - tr.xi_direct));
  }
  // Machine precision for y-: relative to the path scale, a few hundred ulps.
  const bool ok = worst1 < 1e-13 && worst2 < 1e-8;
  return {ok, "y- relative error " + fmt("%.3g", worst1) + " (< 1e-13), xi error " + fmt("%.3g", worst2) +
                  " (< 1e-8)"};
}

Outcome c4_projections() {
  std::mt19937_64 rng(404);
  double proj = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 7, r = 1 + rep % (n - 1);
    Mat a = fx::randn(rng, n, r), b = fx::randn(rng, n, r);
    ProjectionPair pp = complementary_projections(a, b, orthocomplement(a), orthocomplement(b), 0);
    proj = std::max(proj, max_abs(pp.P_beta_perp + pp.P_alpha - Mat::Identity(n, n)));
    proj = std::max(proj, max_abs(pp.P_alpha * pp.P_alpha - pp.P_alpha));
    proj = std::max(proj, max_abs(pp.P_beta_perp * pp.P_beta_perp - pp.P_beta_perp));
  }
  double rk1 = 0.0;
  bool mu_pos = true;
  int done = 0;
  while (done < 200) {
    const int m = 2 + done % 5, n = 1 + done % m;
    Mat A = fx::randn(rng, m, n), B2 = fx::randn(rng, m, n);
    Vec c = fx::randn(rng, m, 1), d = fx::randn(rng, n, 1);
    Mat B1 = B2 + c * d.transpose();
    const double d1 = (A.transpose() * B1).determinant(), d2 = (A.transpose() * B2).determinant();
    if (!(d1 * d2 > 0.0) || std::abs(d1) < 1e-3 || std::abs(d2) < 1e-3) continue;
    ++done;
    const double mu = rank_one_ratio(A, B1, B2);
    mu_pos = mu_pos && mu > 0.0;
    Mat M1 = (A.transpose() * B1).inverse(), M2 = (A.transpose() * B2).inverse();
    Vec lhs = M1.transpose() * d;
    const double s = std::max(1.0, lhs.cwiseAbs().maxCoeff());
    rk1 = std::max(rk1, (lhs - mu * (M2.transpose() * d)).cwiseAbs().maxCoeff() / s);
    if (n > 1) {
      Mat V = orthocomplement(lhs);
      rk1 = std::max(rk1, max_abs(M1 * V - M2 * V) / std::max(1.0, max_abs(M1 * V)));
    }
  }
  const bool ok = proj < 1e-10 && rk1 < 1e-8 && mu_pos;
  return {ok, "projection error " + fmt("%.3g", proj) + " (< 1e-10), rank-one error " + fmt("%.3g", rk1) +
                  " (< 1e-8), mu > 0: " + (mu_pos ? "yes" : "no")};
}

CompanionSet set_of(std::vector<Mat> ms) {
  CompanionSet s;
  for (size_t i = 0; i < ms.size(); ++i) s.labels.push_back("A" + std::to_string(i));
  s.matrices = std::move(ms);
  return s;
}

Outcome c5_jsr() {
  std::mt19937_64 rng(505);
  double single = 0.0;
  Mat J(2, 2);
  J << 0.9, 1.0, 0.0, 0.9;
  std::vector<Mat> singles = {J};
  for (int i = 0; i < 5; ++i) singles.push_back(fx::randn(rng, 3, 3, 0.5));
  for (const auto& A : singles) {
    JsrEstimate e = jsr_bounds(set_of({A}), 30, 1000000);
    const double rho = spectral_radius(A);
    single = std::max({single, std::abs(e.lower - rho), std::abs(e.upper - rho)});
  }
  Mat A(2, 2), B(2, 2);
  A << 1, 1, 0, 1;
  B << 1, 0, 1, 1;
  JsrEstimate g = jsr_bounds(set_of({A, B}), 30, 1000000);
  bool mono = true;
  for (const auto& e : {g, jsr_bounds(set_of({fx::randn(rng, 3, 3, 0.4), fx::randn(rng, 3, 3, 0.4)}), 14, 1000000)})
    for (size_t t = 1; t < e.lower_by_depth.size(); ++t)
      mono = mono && e.lower_by_depth[t] >= e.lower_by_depth[t - 1] && e.upper_by_depth[t] <= e.upper_by_depth[t - 1];
  const bool ok = single < 1e-3 && g.lower >= 1.618 - 1e-3 && !g.certified_lt_one && mono;
  std::ostringstream os;
  os << "singleton error " << fmt("%.3g", single) << " (< 1e-3), golden lower " << fmt("%.6f", g.lower)
     << " (>= 1.617), certified " << (g.certified_lt_one ? "true" : "false") << ", monotone "
     << (mono ? "yes" : "no");
  return {ok, os.str()};
}

Outcome c6_tobit() {
  CksvarModel m = build_example("univariate_tobit");
  VecmForm v = vecm_decompose(m);
  const double g1 = v.Gamma1(+1)(0, 0);
  const double sd = std::sqrt(m.Sigma(0, 0)) / g1;
  const int n = 20000, reps = 2000;
  std::vector<double> term(reps), ym(reps);
  parallel_for(reps, 0, [&](int r) {
    InnovationSpec is;
    is.Sigma = m.Sigma;
    is.seed = mix_seed(mix_seed(606, n), r);
    Path path = simulate(m, n, is, zero_init(1, m.k));
    term[r] = path.y_plus(n - 1) / std::sqrt(static_cast<double>(n));
    ym[r] = path.y_minus.cwiseAbs().maxCoeff() / std::sqrt(static_cast<double>(n));
  });
  const double ks = ks_one_sample(term, [&](double x) { return x <= 0 ? 0.0 : 2.0 * normal_cdf(x / sd) - 1.0; });
  const double med = median(ym);
  return {ks < 0.05 && med < 0.05,
          "KS vs |N(0, " + fmt("%.4g", sd * sd) + ")| " + fmt("%.4f", ks) + " (< 0.05), median max|y-|/sqrt(n) " +
              fmt("%.4f", med) + " (< 0.05)"};
}

Outcome c7_kinked() {
  McSpec s;
  s.model = build_example("infltarget_1b", {{"delta", 0.0}, {"mu", 0.5}});
  s.label = "kinked";
  s.expect = TableConfig::CaseII;
  s.n_list = {20000};
  s.reps = 500;
  s.limit_reps = 20000;
  s.functionals = {Functional::TerminalValue, Functional::OccupationNegative};
  s.seed = 707;
  McReport r = run_mc(s);
  bool ok = true;
  std::ostringstream os;
  for (const auto& fr : r.results) {
    ok = ok && fr.ks < 0.06;
    os << functional_name(fr.functional) << " KS " << fmt("%.4f", fr.ks) << ", ";
  }
  // Sign coherence on the limit sampler.
  VecmForm v = vecm_decompose(threshold_shift(s.model));
  long long agree = 0, total = 0;
  for (int rep = 0; rep < 200; ++rep) {
    BrownianGrid U = brownian_grid(s.model.Sigma, kDefaultGrid, mix_seed(708, rep));
    LimitPath lp = limit_case2(v, Vec::Zero(2), U);
    for (Eigen::Index j = 1; j < lp.Y.size(); ++j) {
      agree += (lp.Y(j) > 0) == (lp.driver(j) > 0) && (lp.Y(j) < 0) == (lp.driver(j) < 0);
      ++total;
    }
  }
  const double frac = static_cast<double>(agree) / total;
  ok = ok && frac >= 0.99 && r.results.size() == 2;
  os << "(< 0.06); sign coherence " << fmt("%.4f", frac) << " (>= 0.99)";
  return {ok, os.str()};
}

Outcome c8_growth() {
  bool ok = true;
  std::ostringstream os;
  const std::vector<std::pair<std::string, CksvarModel>> fixtures = {
      {"infltarget_1b", build_example("infltarget_1b")}, {"univariate_tobit", build_example("univariate_tobit")}};
  for (const auto& [name, model] : fixtures) {
    McSpec s;
    s.model = model;
    s.expect = TableConfig::CaseI;
    s.n_list = {500};
    s.reps = 200;
    s.grid = 256;
    s.functionals = {Functional::TerminalValue};
    s.growth_n = {2000};
    s.seed = 808;
    McReport r = run_mc(s);
    for (const auto& g : r.growth) {
      ok = ok && g.pass;
      os << name << " " << g.series << " " << fmt("%.3f", g.median_ratio) << "; ";
    }
    ok = ok && r.growth.size() == 2;
  }
  os << "(y- < 2, y+ in [1.5, 2.8])";
  return {ok, os.str()};
}

Outcome c9_classification() {
  auto cls = [](const std::string& ex, const ParamMap& pm) {
    return classify_case(vecm_decompose(threshold_shift(build_example(ex, pm))));
  };
  bool ok = cls("infltarget_1b", {{"delta", -0.2}, {"mu", 0.5}}).config == TableConfig::CaseI;
  ok = ok && cls("infltarget_1b", {{"delta", 0.0}, {"mu", 0.5}}).config == TableConfig::CaseII;
  ok = ok && cls("infltarget_1b", {{"delta", 0.0}, {"mu", 1.0}}).linear;
  const double g = 1.5, th = -0.5, mu = 0.5;
  ParamMap pm{{"chi", 0.0}, {"psi", 1.0}, {"gamma", g}, {"theta", th}, {"mu", mu}};
  auto c = cls("natrate_1a", pm);
  ok = ok && c.config == TableConfig::CaseII;
  KinkGeometry kg = kink_geometry(vecm_decompose(threshold_shift(build_example("natrate_1a", pm))));
  Vec bp = kg.beta_plus.col(0) / kg.beta_plus(1, 0), bm = kg.beta_minus.col(0) / kg.beta_minus(1, 0);
  const double want = th * (1 - mu) / (1 - th * g);
  const double err = std::max(std::abs(bp(0)), std::abs(bm(0) - want));
  ok = ok && err < 1e-10;
  return {ok, "configs i / ii / linear / ii as expected: " + std::string(ok ? "yes" : "no") +
                  ", cointegrating vector error " + fmt("%.3g", err) + " (< 1e-10)"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "canonical transform path equivalence", 10, c1_canonical_paths},
      {2, "natural-rate canonical form", 1, c2_natrate_canonical},
      {3, "short-memory recursions", 30, c3_short_memory},
      {4, "projection and rank-one identities", 60, c4_projections},
      {5, "JSR engine", 60, c5_jsr},
      {6, "regulated limit: univariate Tobit", 300, c6_tobit},
      {7, "kinked limit: inflation targeting", 600, c7_kinked},
      {8, "growth diagnostics", 120, c8_growth},
      {9, "classification", 1, c9_classification},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %d %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
