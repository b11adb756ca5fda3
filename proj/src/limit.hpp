#pragma once

#include <cstdint>

#include "vecm.hpp"

namespace cksvar {

inline constexpr int kDefaultGrid = 2048;

struct BrownianGrid {
  Vec grid;  // m+1 points, uniform on [0,1]
  Mat W;     // q x (m+1)
  Mat variance;
  std::uint64_t seed = 0;
};

BrownianGrid brownian_grid(const Mat& variance, int m, std::uint64_t seed, const Vec& W0 = Vec());

Vec censor(const Vec& W);
Vec regulate(const Vec& W);

// G(+1), G(-1) with h = e1'G(+1) = mu e1'G(-1), mu > 0, and G(+1) = G(-1) on h-perp.
struct KinkMap {
  Mat G_plus, G_minus;
  Vec h;
  double mu = 1.0;
};

KinkMap make_kink_map(const Mat& G_plus, const Mat& G_minus, double tol = 1e-8);
Mat kink(const Mat& W, const KinkMap& map);

enum class LimitKind { RegulatedCaseI, KinkedCaseII, Raw };

struct LimitPath {
  Vec grid;
  Vec Y;
  Mat X;       // (p-1) x (m+1)
  LimitKind kind = LimitKind::Raw;
  Mat U0;      // p x (m+1)
  Vec driver;  // e1'P U0 in case (i), vartheta'U0 in case (ii)
  Mat Z() const;
};

inline constexpr double kMembershipTol = 1e-8;

// Z0 in M+ (y >= 0, Pi+ z = 0) or M- (y <= 0, Pi- z = 0); returns +1, -1 or 0 (not a member).
int common_trend_branch(const VecmForm& vecm, const Vec& Z0, double tol = kMembershipTol);

LimitPath limit_case1(const VecmForm& vecm, const Vec& Z0, const BrownianGrid& U, double tol = kRankTol);
LimitPath limit_case2(const VecmForm& vecm, const Vec& Z0, const BrownianGrid& U, double tol = kRankTol);

}  // namespace cksvar
