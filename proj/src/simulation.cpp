#include "simulation.hpp"

#include <cmath>

#include "companion.hpp"
#include "errors.hpp"

namespace cksvar {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Mat gen_innovations(const InnovationSpec& spec, int n) {
  if (n < 1) throw DimensionError("gen_innovations: n must be >= 1");
  Mat L = chol_lower(spec.Sigma, "gen_innovations");
  const Eigen::Index p = L.rows();
  std::vector<double> w = spec.ma_weights;
  if (spec.kind == InnovationKind::IidGaussian || w.empty()) w = {1.0};
  const int m = static_cast<int>(w.size());

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> N01(0.0, 1.0);
  Mat eta(p, n + m - 1);
  for (Eigen::Index t = 0; t < eta.cols(); ++t)
    for (Eigen::Index i = 0; i < p; ++i) eta(i, t) = N01(rng);

  Mat u(p, n);
  if (m == 1 && w[0] == 1.0) {
    u = L * eta;
    return u;
  }
  for (int t = 0; t < n; ++t) {
    Vec acc = Vec::Zero(p);
    for (int i = 0; i < m; ++i) acc += w[i] * eta.col(t + m - 1 - i);
    u.col(t) = L * acc;
  }
  return u;
}

Vec Path::z(int t) const {
  if (t <= 0) return init.col(t + k - 1);
  Vec v(p);
  v(0) = y(t - 1);
  if (p > 1) v.tail(p - 1) = x.col(t - 1);
  return v;
}

double Path::y_at(int t) const { return t <= 0 ? init(0, t + k - 1) : y(t - 1); }

Mat zero_init(int p, int k) { return Mat::Zero(p, k); }

namespace {

// z*_t = (y+, y-, x) store; column t + k - 1 for t in [-k+1, n].
struct StarStore {
  int k;
  Mat S;
  StarStore(int p, int k, int n) : k(k), S(p + 1, n + k) {}
  auto col(int t) { return S.col(t + k - 1); }
  auto col(int t) const { return S.col(t + k - 1); }
};

void set_star(StarStore& st, int t, double yv, const Eigen::Ref<const Vec>& xv, double b) {
  auto c = st.col(t);
  c(0) = yv > b ? yv : b;
  c(1) = yv < b ? yv : b;
  c.tail(xv.size()) = xv;
}

Path make_path(const CksvarModel& m, const Mat& u, const Mat& init) {
  if (u.rows() != m.p) throw DimensionError("simulate: innovations must have p rows");
  if (init.rows() != m.p || init.cols() != m.k) throw DimensionError("simulate: init must be p x k");
  Path path;
  path.n = static_cast<int>(u.cols());
  path.p = m.p;
  path.k = m.k;
  path.b = m.b;
  path.init = init;
  path.innovations = u;
  path.y.resize(path.n);
  path.x.resize(m.p - 1, path.n);
  path.y_plus.resize(path.n);
  path.y_minus.resize(path.n);
  return path;
}

template <class Solve>
Path run(const CksvarModel& m, const Mat& u, const Mat& init, Solve&& solve) {
  Path path = make_path(m, u, init);
  const int p = m.p, k = m.k, n = path.n;
  StarStore st(p, k, n);
  for (int j = 0; j < k; ++j) set_star(st, j - k + 1, init(0, j), init.col(j).tail(p - 1), m.b);
  std::vector<Mat> L;
  for (int i = 1; i <= k; ++i) L.push_back(m.lag_full(i));
  Vec rhs(p), z(p);
  for (int t = 1; t <= n; ++t) {
    rhs = m.c + u.col(t - 1);
    for (int i = 1; i <= k; ++i) rhs.noalias() += L[i - 1] * st.col(t - i);
    solve(t, rhs, z);
    set_star(st, t, z(0), z.tail(p - 1), m.b);
    path.y(t - 1) = z(0);
    if (p > 1) path.x.col(t - 1) = z.tail(p - 1);
    path.y_plus(t - 1) = st.col(t)(0);
    path.y_minus(t - 1) = st.col(t)(1);
  }
  return path;
}

}  // namespace

Path simulate(const CanonicalModel& cm, const Mat& u, const Mat& init) {
  const CksvarModel& m = cm.model;
  m.check();
  if (!m.is_canonical(0.0) || m.b != 0.0) throw DimensionError("simulate: canonical model expected");
  return run(m, u, init, [](int, const Vec& rhs, Vec& z) { z = rhs; });
}

Path simulate(const CksvarModel& m, const Mat& u, const Mat& init) {
  DgpReport rep = validate_dgp(m);
  if (!rep.coherent) throw DgpError("simulate: " + (rep.messages.empty() ? std::string("incoherent model") : rep.messages[0]));
  const double b = m.b;
  Eigen::PartialPivLU<Mat> lp(m.Phi0(+1)), lm(m.Phi0(-1));
  const Vec shift_p = m.phi0_minus * b, shift_m = m.phi0_plus * b;
  return run(m, u, init, [&](int t, const Vec& rhs, Vec& z) {
    Vec zp = lp.solve(rhs - shift_p);
    Vec zm = lm.solve(rhs - shift_m);
    bool ok_p = zp(0) >= b, ok_m = zm(0) < b;
    if (ok_p != ok_m) {
      z = ok_p ? zp : zm;
      return;
    }
    double tol = kBranchTol * (1.0 + rhs.cwiseAbs().maxCoeff() + std::abs(b));
    if (std::abs(zp(0) - b) <= tol || std::abs(zm(0) - b) <= tol) {
      z = zp;  // on the threshold: 1+(0) = 1
      z(0) = b;
      return;
    }
    throw DgpError("simulate: coherence violated at t = " + std::to_string(t) +
                   (ok_p ? " (both branches sign-consistent)" : " (no branch sign-consistent)"));
  });
}

Path simulate(const CksvarModel& m, int n, const InnovationSpec& spec, const Mat& init) {
  return simulate(m, gen_innovations(spec, n), init);
}

namespace {

// Presample beyond the model's own k (from k = 1 padding) is taken as zero.
Vec z_pad(const Path& path, int t) {
  if (t < -path.k + 1) return Vec::Zero(path.p);
  return path.z(t);
}

double yminus_pad(const Path& path, int t) {
  if (t < -path.k + 1) return 0.0;
  double v = path.y_at(t);
  return v < 0.0 ? v : 0.0;
}

Vec zstar_pad(const Path& path, int t) {
  Vec z = z_pad(path, t);
  Vec s(path.p + 1);
  s(0) = z(0) >= 0.0 ? z(0) : 0.0;
  s(1) = z(0) < 0.0 ? z(0) : 0.0;
  s.tail(path.p - 1) = z.tail(path.p - 1);
  return s;
}

void check_pair(const VecmForm& v, const Path& path, const char* op) {
  if (!v.canonical) throw CaseError(std::string(op) + ": requires the canonical form");
  if (path.p != v.p) throw DimensionError(std::string(op) + ": path dimension differs from the model");
  if (path.b != 0.0) throw DimensionError(std::string(op) + ": path must use threshold 0");
}

}  // namespace

Case1Trace short_memory_case1(const VecmForm& v, const Path& path, double tol) {
  check_pair(v, path, "short_memory_case1");
  Case1Objects o = projection_case1(v, tol);
  Mat F0 = build_F(v, 0.0, tol), F1 = build_F(v, 1.0, tol);
  Mat dF = F1 - F0;
  const int p = v.p, k = v.k, r = static_cast<int>(o.fac.alpha.cols());
  const int n1 = p * (k - 1) + r, N = n1 + k, n = path.n;
  Mat BT = o.bold_beta.transpose();
  Mat Bp = BT.leftCols(p);

  auto bold_z = [&](int t) {
    Vec bz(k * p);
    for (int j = 0; j < k; ++j) bz.segment(j * p, p) = z_pad(path, t - j);
    return bz;
  };

  Case1Trace tr;
  tr.zeta.resize(N, n + 1);
  tr.xi_direct.resize(n1, n + 1);
  tr.delta.resize(n + 1);
  tr.ybar.resize(n + 1);
  tr.y_minus.resize(n);

  Vec zeta(N);
  zeta.head(n1) = BT * bold_z(0);
  zeta(n1) = yminus_pad(path, 0);
  for (int j = 1; j < k; ++j) zeta(n1 + j) = yminus_pad(path, -j);
  tr.zeta.col(0) = zeta;
  tr.xi_direct.col(0) = zeta.head(n1);
  tr.delta(0) = 1.0;
  tr.ybar(0) = zeta(n1);

  Vec mu = Vec::Zero(N);
  mu.head(n1) = Bp * v.c;
  mu(n1) = v.c(0);
  Vec eps = Vec::Zero(N), next(N);
  double delta = 1.0;
  for (int t = 1; t <= n; ++t) {
    const auto u = path.innovations.col(t - 1);
    eps.head(n1) = Bp * u;
    eps(n1) = u(0);
    next.noalias() = F0 * zeta;
    if (delta != 0.0) next.noalias() += delta * (dF * zeta);
    zeta = mu + next + eps;
    double ybar = zeta(n1);
    double yprev_plus = std::max(path.y_at(t - 1), 0.0);
    double yt = yprev_plus + ybar;
    delta = yt < 0.0 ? yt / ybar : 0.0;
    tr.zeta.col(t) = zeta;
    tr.delta(t) = delta;
    tr.ybar(t) = ybar;
    tr.y_minus(t - 1) = delta * ybar;
    tr.xi_direct.col(t) = BT * bold_z(t);
  }
  return tr;
}

Case2Trace short_memory_case2(const VecmForm& v, const Path& path, double tol) {
  check_pair(v, path, "short_memory_case2");
  KinkGeometry g = kink_geometry(v, tol);
  Mat A = case2_bold_alpha(v, g);
  Mat Bp = case2_bold_beta(v, g, +1), Bm = case2_bold_beta(v, g, -1);
  const int p = v.p, k = v.k, s = p + 1, n = path.n;
  const int nz = p + (k - 1) * s, nx = static_cast<int>(A.cols());

  auto bold_z = [&](int t) {
    Vec bz(nz);
    bz.head(p) = z_pad(path, t);
    for (int j = 1; j < k; ++j) bz.segment(p + (j - 1) * s, s) = zstar_pad(path, t - j);
    return bz;
  };
  auto B_of = [&](double y) -> const Mat& { return y >= 0.0 ? Bp : Bm; };

  Case2Trace tr;
  tr.xi.resize(nx, n + 1);
  tr.xi_direct.resize(nx, n + 1);
  tr.delta = Vec::Zero(n + 1);
  Vec xi = B_of(path.y_at(0)).transpose() * bold_z(0);
  tr.xi.col(0) = xi;
  tr.xi_direct.col(0) = xi;
  Vec cc = Vec::Zero(nz), uu = Vec::Zero(nz);
  cc.head(p) = v.c;
  for (int t = 1; t <= n; ++t) {
    double y0 = path.y_at(t - 1), y1 = path.y_at(t);
    // Regime switch under the 1{y >= 0} convention (covers a start exactly at zero).
    double delta = ((y0 >= 0.0) != (y1 >= 0.0)) ? y1 / (y1 - y0) : 0.0;
    Mat Bbar = (1.0 - delta) * B_of(y0) + delta * B_of(y1);
    uu.head(p) = path.innovations.col(t - 1);
    xi = Bbar.transpose() * (cc + uu) + xi + Bbar.transpose() * (A * xi);
    tr.xi.col(t) = xi;
    tr.delta(t) = delta;
    tr.xi_direct.col(t) = B_of(y1).transpose() * bold_z(t);
  }
  return tr;
}

ScaledPath scale_path(const Path& path, int grid_points) {
  if (grid_points < 1 || path.n < grid_points) throw DimensionError("scale_path: need 1 <= grid_points <= n");
  ScaledPath sp;
  sp.lambda_grid.resize(grid_points + 1);
  sp.Z.resize(path.p, grid_points + 1);
  const double s = 1.0 / std::sqrt(static_cast<double>(path.n));
  for (int j = 0; j <= grid_points; ++j) {
    sp.lambda_grid(j) = static_cast<double>(j) / grid_points;
    long long idx = static_cast<long long>(path.n) * j / grid_points;
    sp.Z.col(j) = s * path.z(static_cast<int>(idx));
  }
  return sp;
}

}  // namespace cksvar
