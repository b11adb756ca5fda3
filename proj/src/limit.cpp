#include "limit.hpp"

#include <cmath>
#include <random>

#include "errors.hpp"

namespace cksvar {

BrownianGrid brownian_grid(const Mat& variance, int m, std::uint64_t seed, const Vec& W0) {
  if (m < 1) throw DimensionError("brownian_grid: m must be >= 1");
  Mat L = chol_lower(variance, "brownian_grid");
  const Eigen::Index q = L.rows();
  if (W0.size() != 0 && W0.size() != q) throw DimensionError("brownian_grid: W0 has the wrong length");
  BrownianGrid g;
  g.variance = variance;
  g.seed = seed;
  g.grid.resize(m + 1);
  for (int j = 0; j <= m; ++j) g.grid(j) = static_cast<double>(j) / m;
  g.W.resize(q, m + 1);
  g.W.col(0) = W0.size() ? W0 : Vec::Zero(q);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01(0.0, 1.0);
  const double sd = std::sqrt(1.0 / m);
  Vec e(q);
  for (int j = 1; j <= m; ++j) {
    for (Eigen::Index i = 0; i < q; ++i) e(i) = N01(rng);
    g.W.col(j) = g.W.col(j - 1) + sd * (L * e);
  }
  return g;
}

Vec censor(const Vec& W) { return W.cwiseMax(0.0); }

Vec regulate(const Vec& W) {
  Vec V(W.size());
  double run = 0.0;
  for (Eigen::Index j = 0; j < W.size(); ++j) {
    run = std::max(run, -W(j));
    V(j) = W(j) + run;
  }
  return V;
}

KinkMap make_kink_map(const Mat& Gp, const Mat& Gm, double tol) {
  if (Gp.rows() != Gm.rows() || Gp.cols() != Gm.cols() || Gp.rows() < 1)
    throw DimensionError("kink: G(+1) and G(-1) must have equal, nonzero shape");
  KinkMap k;
  k.G_plus = Gp;
  k.G_minus = Gm;
  k.h = Gp.row(0).transpose();
  Vec hm = Gm.row(0).transpose();
  const double hn = k.h.norm(), mn = hm.norm();
  if (hn == 0.0 || mn == 0.0) throw NumericError("kink: condition (a) fails, e1'G(+-1) must be nonzero");
  k.mu = k.h.dot(hm) / (mn * mn);
  if (!(k.mu > 0.0) || (k.h - k.mu * hm).norm() > tol * (1.0 + hn))
    throw NumericError("kink: condition (a) fails, e1'G(+1) is not a positive multiple of e1'G(-1)");
  // Continuity: G(+1) and G(-1) must agree on the switching hyperplane h'w = 0.
  const Eigen::Index q = Gp.cols();
  Mat proj = Mat::Identity(q, q) - k.h * k.h.transpose() / (hn * hn);
  double gap = max_abs((Gp - Gm) * proj);
  if (gap > tol * (1.0 + std::max(max_abs(Gp), max_abs(Gm))))
    throw NumericError("kink: condition (b) fails, the map is discontinuous across h'w = 0");
  return k;
}

Mat kink(const Mat& W, const KinkMap& map) {
  if (W.rows() != map.G_plus.cols()) throw DimensionError("kink: W has the wrong number of rows");
  Mat V(map.G_plus.rows(), W.cols());
  for (Eigen::Index j = 0; j < W.cols(); ++j)
    V.col(j) = (map.h.dot(W.col(j)) >= 0.0 ? map.G_plus : map.G_minus) * W.col(j);
  return V;
}

Mat LimitPath::Z() const {
  Mat Z(X.rows() + 1, Y.size());
  Z.row(0) = Y.transpose();
  Z.bottomRows(X.rows()) = X;
  return Z;
}

int common_trend_branch(const VecmForm& v, const Vec& Z0, double tol) {
  if (Z0.size() != v.p) throw DimensionError("Z0 must have length p");
  const double zn = Z0.norm();
  if (zn == 0.0) return +1;
  auto null_ok = [&](int regime) {
    Mat Pi = v.Pi(regime);
    return (Pi * Z0).norm() <= tol * std::max(1.0, max_singular_value(Pi) * zn);
  };
  const double y0 = Z0(0), ytol = tol * zn;
  if (y0 >= -ytol && null_ok(+1)) return +1;
  if (y0 <= ytol && null_ok(-1)) return -1;
  return 0;
}

namespace {

void check_grid(const VecmForm& v, const BrownianGrid& U) {
  if (U.W.rows() != v.p) throw DimensionError("limit: Brownian motion must be p-dimensional");
}

}  // namespace

LimitPath limit_case1(const VecmForm& v, const Vec& Z0, const BrownianGrid& U, double tol) {
  check_grid(v, U);
  if (common_trend_branch(v, Z0) == 0) throw DimensionError("limit_case1: Z0 is not in the common-trend space");
  Case1Objects o = projection_case1(v, tol);
  LimitPath lp;
  lp.kind = LimitKind::RegulatedCaseI;
  lp.grid = U.grid;
  const Eigen::Index m1 = U.W.cols();
  lp.U0 = (o.Gamma1_plus * Z0).replicate(1, m1) + U.W;
  Mat PU = o.P * lp.U0;
  lp.driver = PU.row(0).transpose();
  Vec sup(m1);
  double run = 0.0;
  for (Eigen::Index j = 0; j < m1; ++j) {
    run = std::max(run, -lp.driver(j));
    sup(j) = run;
  }
  Vec load = o.kappa / o.kappa1;
  Mat Z = PU + load * sup.transpose();
  lp.Y = Z.row(0).transpose();
  lp.X = Z.bottomRows(v.p - 1);
  return lp;
}

LimitPath limit_case2(const VecmForm& v, const Vec& Z0, const BrownianGrid& U, double tol) {
  check_grid(v, U);
  if (common_trend_branch(v, Z0) == 0) throw DimensionError("limit_case2: Z0 is not in the common-trend space");
  KinkGeometry g = kink_geometry(v, tol);
  LimitPath lp;
  lp.kind = LimitKind::KinkedCaseII;
  lp.grid = U.grid;
  const Eigen::Index m1 = U.W.cols();
  lp.U0 = (g.Gamma1(Z0(0)) * Z0).replicate(1, m1) + U.W;
  lp.driver = (g.vartheta.transpose() * lp.U0).transpose();
  Mat Z(v.p, m1);
  for (Eigen::Index j = 0; j < m1; ++j) Z.col(j) = g.P(lp.driver(j)) * lp.U0.col(j);
  lp.Y = Z.row(0).transpose();
  lp.X = Z.bottomRows(v.p - 1);
  // Y = h(vartheta'U0) vartheta'U0 must agree with the first row.
  for (Eigen::Index j = 0; j < m1; ++j) {
    double alt = g.h(lp.driver(j)) * lp.driver(j);
    if (std::abs(alt - lp.Y(j)) > 1e-8 * (1.0 + std::abs(alt)))
      throw NumericError("limit_case2: internal Y cross-check failed");
  }
  return lp;
}

}  // namespace cksvar
