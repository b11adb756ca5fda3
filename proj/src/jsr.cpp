#include "jsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

#include "errors.hpp"

namespace cksvar {

void CompanionSet::check() const {
  if (matrices.empty()) throw DimensionError("companion set is empty");
  const Eigen::Index d = matrices[0].rows();
  for (const Mat& M : matrices)
    if (M.rows() != d || M.cols() != d) throw DimensionError("companion set: matrices must be square of equal size");
  if (!labels.empty() && labels.size() != matrices.size())
    throw DimensionError("companion set: one label per matrix");
}

namespace {

struct Child {
  Mat M;
  double rho = 0.0;
  double nrm = 0.0;
};

template <class F>
void parallel_for(size_t n, int threads, F&& f) {
  if (threads <= 1 || n < 256) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  size_t chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

// One breadth-first pass in the spectral norm of the given basis. L0 is a
// lower bound already known (it only tightens pruning).
JsrEstimate bfs(const std::vector<Mat>& mats, int depth, long long budget, int threads, double L0) {
  JsrEstimate est;
  const size_t m = mats.size();
  const Eigen::Index d = mats[0].rows();
  std::vector<Mat> frontier{Mat::Identity(d, d)};
  double L = L0, U = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= depth; ++t) {
    if (frontier.empty()) {
      // Every branch was pruned: the bounds are final.
      est.lower_by_depth.push_back(L);
      est.upper_by_depth.push_back(U);
      est.depth = t;
      continue;
    }
    const size_t n = frontier.size() * m;
    if (est.products + static_cast<long long>(n) > budget) {
      est.budget_exhausted = true;
      break;
    }
    std::vector<Child> kids(n);
    const double inv_t = 1.0 / t;
    parallel_for(n, threads, [&](size_t i) {
      Child& c = kids[i];
      c.M = frontier[i / m] * mats[i % m];
      c.rho = std::pow(spectral_radius(c.M), inv_t);
      c.nrm = std::pow(spectral_norm(c.M), inv_t);
    });
    est.products += static_cast<long long>(n);
    for (const Child& c : kids) L = std::max(L, c.rho);
    double Ut = L;
    std::vector<Mat> next;
    for (Child& c : kids) {
      if (c.nrm > L) {
        Ut = std::max(Ut, c.nrm);
        next.push_back(std::move(c.M));
      }
    }
    U = std::min(U, Ut);
    frontier = std::move(next);
    est.lower_by_depth.push_back(L);
    est.upper_by_depth.push_back(U);
    est.depth = t;
  }
  est.lower = L;
  est.upper = U;
  return est;
}

constexpr Eigen::Index kMaxKronDim = 30;

// P = I + sum A_i' P A_i / g2 by fixed-point iteration; empty on divergence.
// In the norm |x|_P every A_i has gain below sqrt(g2).
Mat joint_lyapunov(const std::vector<Mat>& mats, double g2) {
  const Eigen::Index d = mats[0].rows();
  Mat P = Mat::Identity(d, d);
  for (int it = 0; it < 5000; ++it) {
    Mat next = Mat::Identity(d, d);
    for (const Mat& A : mats) next += A.transpose() * P * A / g2;
    double change = max_abs(next - P), size = max_abs(next);
    P = std::move(next);
    if (!std::isfinite(size) || size > 1e12) return Mat();
    if (change <= 1e-13 * size) return P;
  }
  return Mat();
}

}  // namespace

JsrEstimate jsr_bounds(const CompanionSet& set, int depth, long long budget, int threads) {
  set.check();
  if (depth < 1) throw DimensionError("jsr_bounds: depth must be >= 1");
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());

  std::vector<Mat> mats;
  for (const Mat& M : set.matrices) {
    bool dup = false;
    for (const Mat& N : mats) dup = dup || M == N;
    if (!dup) mats.push_back(M);
  }

  JsrEstimate est;
  if (mats.size() == 1) {
    // Gelfand: the joint spectral radius of a single matrix is its spectral radius.
    double r = spectral_radius(mats[0]);
    est.lower = est.upper = r;
    est.depth = depth;
    est.exact = true;
    est.products = 1;
    est.lower_by_depth.assign(depth, r);
    est.upper_by_depth.assign(depth, r);
    est.certified_lt_one = r < 1.0;
    return est;
  }

  est = bfs(mats, depth, budget, threads, 0.0);

  // The JSR is similarity invariant, so the same search in a better-adapted
  // norm gives another valid upper bound. Candidate norms come from the
  // joint Lyapunov iteration at a few levels just above sqrt(rho(sum A(x)A)).
  const Eigen::Index d = mats[0].rows();
  if (d <= kMaxKronDim && est.upper > est.lower) {
    Mat K = Mat::Zero(d * d, d * d);
    for (const Mat& A : mats) K += Eigen::kroneckerProduct(A, A).eval();
    const double base = std::max(spectral_radius(K), est.lower * est.lower);
    for (double eps : {1e-3, 1e-2, 1e-1}) {
      if (base <= 0.0) break;
      Mat P = joint_lyapunov(mats, base * (1.0 + eps));
      if (P.size() == 0) continue;
      Eigen::LLT<Mat> llt(P);
      if (llt.info() != Eigen::Success) continue;
      Mat R = llt.matrixU();
      Mat Rinv = R.triangularView<Eigen::Upper>().solve(Mat::Identity(d, d));
      std::vector<Mat> tm;
      for (const Mat& A : mats) tm.push_back(R * A * Rinv);
      JsrEstimate alt = bfs(tm, depth, budget, threads, est.lower);
      est.products += alt.products;
      est.lower = std::max(est.lower, alt.lower);
      est.upper = std::min(est.upper, alt.upper);
      const size_t n = std::max(est.upper_by_depth.size(), alt.upper_by_depth.size());
      auto pad = [n](std::vector<double>& v) {
        if (!v.empty()) v.resize(n, v.back());
      };
      pad(est.lower_by_depth);
      pad(est.upper_by_depth);
      pad(alt.lower_by_depth);
      pad(alt.upper_by_depth);
      for (size_t i = 0; i < alt.upper_by_depth.size() && i < est.upper_by_depth.size(); ++i) {
        est.lower_by_depth[i] = std::max(est.lower_by_depth[i], alt.lower_by_depth[i]);
        est.upper_by_depth[i] = std::min(est.upper_by_depth[i], alt.upper_by_depth[i]);
      }
      est.depth = std::max(est.depth, alt.depth);
    }
  }
  est.certified_lt_one = est.upper < 1.0;
  return est;
}

}  // namespace cksvar
