#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "model.hpp"
#include "vecm.hpp"

namespace cksvar {

enum class InnovationKind { IidGaussian, MaTruncated };

struct InnovationSpec {
  InnovationKind kind = InnovationKind::IidGaussian;
  Mat Sigma;
  std::vector<double> ma_weights;  // theta_0, theta_1, ...; empty means (1)
  std::uint64_t seed = 0;
};

inline constexpr int kDefaultMaLength = 50;

// splitmix64 finaliser; used for per-replication seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// p x n matrix of innovations, column t-1 holds u_t.
Mat gen_innovations(const InnovationSpec& spec, int n);

struct Path {
  int n = 0, p = 1, k = 1;
  double b = 0.0;
  Vec y;          // y_1..y_n
  Mat x;          // (p-1) x n
  Vec y_plus, y_minus;
  Mat init;       // p x k presample, column j is z_{j-k+1}; last column is z_0
  Mat innovations;  // p x n

  // z_t for t in [-k+1, n].
  Vec z(int t) const;
  double y_at(int t) const;
};

inline constexpr double kBranchTol = 1e-12;

// Canonical recursion (Phi0 = I*), computed directly.
Path simulate(const CanonicalModel& model, const Mat& u, const Mat& init);
// Structural recursion: both branches solved, the sign-consistent one kept.
Path simulate(const CksvarModel& model, const Mat& u, const Mat& init);
Path simulate(const CksvarModel& model, int n, const InnovationSpec& spec, const Mat& init);

Mat zero_init(int p, int k);

struct Case1Trace {
  Mat zeta;            // columns t = 0..n
  Vec delta;           // t = 0..n
  Vec ybar;            // t = 0..n
  Vec y_minus;         // reconstructed y-_t, t = 1..n
  Mat xi_direct;       // beta+' z_t and lagged differences, t = 0..n
};

Case1Trace short_memory_case1(const VecmForm& vecm, const Path& path, double tol = kRankTol);

struct Case2Trace {
  Mat xi;         // recursion, columns t = 0..n
  Mat xi_direct;  // bold_beta(y_t)' bold_z_t
  Vec delta;      // t = 1..n (index 0 unused)
};

Case2Trace short_memory_case2(const VecmForm& vecm, const Path& path, double tol = kRankTol);

struct ScaledPath {
  Vec lambda_grid;
  Mat Z;  // p x (grid_points + 1)
};

ScaledPath scale_path(const Path& path, int grid_points);

}  // namespace cksvar
