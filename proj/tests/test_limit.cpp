#include <random>

#include "doctest.h"
#include "errors.hpp"
#include "fixtures.hpp"
#include "harness.hpp"
#include "limit.hpp"
#include "stats.hpp"

using namespace cksvar;

namespace {

Vec vec_of(std::initializer_list<double> xs) {
  Vec v(xs.size());
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

VecmForm vecm_1b(double delta, const ParamMap& extra = {}) {
  ParamMap pm = extra;
  pm["delta"] = delta;
  return vecm_decompose(threshold_shift(build_example("infltarget_1b", pm)));
}

}  // namespace

TEST_SUITE("limit") {
  TEST_CASE("brownian grid: start, spacing and covariance") {
    Mat S(2, 2);
    S << 1.0, 0.3, 0.3, 0.5;
    BrownianGrid g = brownian_grid(S, 64, 3, vec_of({1.0, -2.0}));
    CHECK(g.grid(0) == 0.0);
    CHECK(g.grid(64) == 1.0);
    CHECK(g.W(0, 0) == 1.0);
    CHECK(g.W(1, 0) == -2.0);
    Mat C = Mat::Zero(2, 2);
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
      BrownianGrid h = brownian_grid(S, 8, 1000 + r);
      C += h.W.col(8) * h.W.col(8).transpose();
    }
    C /= reps;
    CHECK(max_abs(C - S) < 0.03);
    CHECK_THROWS_AS(brownian_grid(S, 0, 1), DimensionError);
  }

  TEST_CASE("censor and regulate") {
    Vec w = vec_of({0.0, -1.0, 0.5});
    CHECK(censor(w) == vec_of({0.0, 0.0, 0.5}));
    CHECK(regulate(w) == vec_of({0.0, 0.0, 1.5}));
  }

  TEST_CASE("regulated BM at time one has the law of |N(0,1)|") {
    std::vector<double> v;
    for (int r = 0; r < 5000; ++r) {
      BrownianGrid g = brownian_grid(Mat::Identity(1, 1), 2048, mix_seed(5, r));
      Vec R = regulate(g.W.row(0).transpose());
      v.push_back(R(R.size() - 1));
      CHECK(R.minCoeff() >= 0.0);
    }
    double ks = ks_one_sample(v, [](double x) { return x <= 0 ? 0.0 : 2.0 * normal_cdf(x) - 1.0; });
    CHECK(ks < 0.03);
  }

  TEST_CASE("kinked BM with different scales on each side") {
    Mat Gp = Mat::Constant(1, 1, 2.0), Gm = Mat::Constant(1, 1, 1.0);
    KinkMap km = make_kink_map(Gp, Gm);
    CHECK(km.mu == doctest::Approx(2.0));
    Mat W(1, 3);
    W << 1.0, -1.0, 0.0;
    Mat V = kink(W, km);
    CHECK(V(0, 0) == 2.0);
    CHECK(V(0, 1) == -1.0);
    CHECK(V(0, 2) == 0.0);
  }

  TEST_CASE("kink map conditions") {
    Mat Gp(1, 2), Gm(1, 2);
    Gp << 1, 0;
    Gm << -1, 0;
    CHECK_THROWS_WITH_AS(make_kink_map(Gp, Gm), doctest::Contains("(a)"), NumericError);
    Mat Hp = Mat::Identity(2, 2), Hm = Mat::Identity(2, 2);
    Hm(1, 1) = 2.0;
    CHECK_THROWS_WITH_AS(make_kink_map(Hp, Hm), doctest::Contains("(b)"), NumericError);
    Mat Kp = Mat::Identity(2, 2), Km = Mat::Identity(2, 2);
    Km(0, 0) = 0.5;
    Km(1, 0) = 0.7;  // differs only along h = e1
    CHECK_NOTHROW(make_kink_map(Kp, Km));
  }

  TEST_CASE("kink map is Lipschitz") {
    Mat Kp = Mat::Identity(2, 2), Km = Mat::Identity(2, 2);
    Km(0, 0) = 0.5;
    Km(1, 0) = 0.7;
    KinkMap km = make_kink_map(Kp, Km);
    const double L = std::max(spectral_norm(Kp), spectral_norm(Km));
    std::mt19937_64 rng(1);
    for (int r = 0; r < 500; ++r) {
      Mat a = fx::randn(rng, 2, 1), b = fx::randn(rng, 2, 1);
      CHECK((kink(a, km) - kink(b, km)).norm() <= L * (a - b).norm() + 1e-12);
    }
  }

  TEST_CASE("case (i) limit: regulated, starts at Z0, y stays nonnegative") {
    VecmForm v = vecm_1b(-0.2);
    Case1Objects o = projection_case1(v);
    Vec z0 = o.P.col(0);  // in the common-trend space
    z0 /= z0(0);
    REQUIRE(common_trend_branch(v, z0) == +1);
    BrownianGrid U = brownian_grid(v.Sigma, 512, 9);
    LimitPath lp = limit_case1(v, z0, U);
    CHECK(lp.kind == LimitKind::RegulatedCaseI);
    CHECK(lp.Y.minCoeff() >= -1e-12);
    CHECK((lp.Z().col(0) - z0).norm() < 1e-10);
    // Y increases only where the driver hits a new minimum below zero.
    Vec drv = lp.driver;
    double run = 0.0;
    for (Eigen::Index j = 0; j < drv.size(); ++j) {
      run = std::max(run, -drv(j));
      CHECK(lp.Y(j) == doctest::Approx(drv(j) + run).epsilon(1e-9));
    }
    Vec bad = Vec::Zero(2);
    bad(0) = -1.0;
    CHECK_THROWS_AS(limit_case1(v, bad, U), DimensionError);
  }

  TEST_CASE("univariate Tobit limit is W plus the running max of its negative part") {
    VecmForm v = vecm_decompose(build_example("univariate_tobit"));
    BrownianGrid U = brownian_grid(v.Sigma, 256, 4);
    LimitPath lp = limit_case1(v, Vec::Zero(1), U);
    Vec want = regulate(U.W.row(0).transpose());
    CHECK((lp.Y - want).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("case (ii) limit: sign coherence and kink") {
    VecmForm v = vecm_1b(0.0);
    KinkGeometry g = kink_geometry(v);
    BrownianGrid U = brownian_grid(v.Sigma, 1024, 12);
    LimitPath lp = limit_case2(v, Vec::Zero(2), U);
    CHECK(lp.kind == LimitKind::KinkedCaseII);
    for (Eigen::Index j = 0; j < lp.Y.size(); ++j) {
      const double d = lp.driver(j);
      CHECK(lp.Y(j) == doctest::Approx(g.h(d) * d).epsilon(1e-10));
      if (d != 0.0) CHECK((lp.Y(j) > 0) == (d > 0));
    }
  }

  TEST_CASE("inflation targeting delta = 0: pi loading on each side") {
    // Both rows of P(+-1) are proportional to alpha_perp'; the pi row scales by 13/11 below zero
    // and its variance above zero is sigma_eta^2 whatever sigma_eps is.
    for (double se : {1.0, 0.7}) {
      VecmForm v = vecm_1b(0.0, {{"sigma_eta", se}, {"sigma_eps", 1.3}, {"rho", 0.2}});
      KinkGeometry g = kink_geometry(v);
      Vec rp = g.P_plus.row(1).transpose(), rm = g.P_minus.row(1).transpose();
      CHECK((rm - (13.0 / 11.0) * rp).norm() < 1e-12);
      CHECK(rp.dot(v.Sigma * rp) == doctest::Approx(se * se).epsilon(1e-12));
      CHECK(g.mu == doctest::Approx(14.0 / 11.0).epsilon(1e-12));
    }
  }

  TEST_CASE("linear model: case (ii) limit is the Beveridge-Nelson trend") {
    VecmForm v = vecm_decompose(build_example("univariate_tobit", {{"phi1_minus", 1.0}}));
    BrownianGrid U = brownian_grid(v.Sigma, 128, 2);
    LimitPath lp = limit_case2(v, Vec::Zero(1), U);
    CHECK((lp.Y - U.W.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("membership of the common-trend space") {
    VecmForm v = vecm_1b(-0.2);
    CHECK(common_trend_branch(v, Vec::Zero(2)) == +1);
    Vec z = Vec::Ones(2);  // beta+ = (1, -1): Pi+ z = 0
    CHECK(common_trend_branch(v, z) == +1);
    CHECK(common_trend_branch(v, -z) == 0);
    CHECK_THROWS_AS(common_trend_branch(v, Vec::Zero(3)), DimensionError);
  }
}
