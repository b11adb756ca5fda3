#include <random>

#include "companion.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "fixtures.hpp"
#include "harness.hpp"

using namespace cksvar;

namespace {

bool has_root(const std::vector<std::complex<double>>& roots, double z, double tol = 1e-9) {
  for (auto r : roots)
    if (std::abs(r - z) < tol) return true;
  return false;
}

const NamedCheck* find_check(const AssumptionReport& r, const std::string& name) {
  for (const auto& c : r.case_specific)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_SUITE("companion") {
  TEST_CASE("determinant roots of the univariate Tobit") {
    CksvarModel m = build_example("univariate_tobit");
    auto rp = det_poly_roots(m, +1), rm = det_poly_roots(m, -1);
    REQUIRE(rp.size() == 1);
    REQUIRE(rm.size() == 1);
    CHECK(has_root(rp, 1.0));
    CHECK(has_root(rm, 2.0));
  }

  TEST_CASE("companion eigenvalues are reciprocal roots") {
    std::mt19937_64 rng(6);
    CksvarModel m = fx::random_coherent(rng, 3, 2);
    for (int s : {+1, -1}) {
      Mat C = companion_matrix(m, s);
      CHECK(C.rows() == 6);
      for (auto z : det_poly_roots(m, s)) {
        // det Phi(z) = det Phi0 * det(I - C z)
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(6, 6) - C.cast<std::complex<double>>() * z;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        CHECK(svd.singularValues().minCoeff() < 1e-9 * svd.singularValues().maxCoeff());
      }
    }
  }

  TEST_CASE("F_delta is affine in delta") {
    VecmForm v = vecm_decompose(to_canonical(build_example("infltarget_1b")));
    Mat F0 = build_F(v, 0.0), F1 = build_F(v, 1.0);
    for (double d : {0.1, 0.37, 0.9}) CHECK(max_abs(build_F(v, d) - ((1 - d) * F0 + d * F1)) < 1e-14);
    CHECK_THROWS_AS(build_F(v, 1.5), DimensionError);
    CHECK_THROWS_AS(build_F(vecm_decompose(build_example("infltarget_1b")), 0.5), CaseError);
  }

  TEST_CASE("certified JSR bounds the eigenvalues of both extremes") {
    VecmForm v = vecm_decompose(to_canonical(build_example("infltarget_1b")));
    CompanionSet s = build_F_set(v);
    JsrEstimate e = jsr_bounds(s);
    REQUIRE(e.certified_lt_one);
    for (const auto& F : s.matrices) CHECK(spectral_radius(F) < 1.0);
    CHECK(e.upper < 1.0);
  }

  TEST_CASE("inflation targeting example passes every assumption") {
    AssumptionReport r = verify_assumptions(build_example("infltarget_1b"));
    CHECK(r.all_ok());
    const NamedCheck* k = find_check(r, "CO(i).3 kappa1<0");
    REQUIRE(k);
    CHECK(k->value < 0.0);
    CHECK(find_check(r, "CO(i).2 JSR")->pass);
    AssumptionReport r2 = verify_assumptions(build_example("infltarget_1b", {{"delta", 0.0}}));
    CHECK(r2.all_ok());
    REQUIRE(find_check(r2, "CO(ii).3 det-sign"));
    CHECK(find_check(r2, "CO(ii).3 det-sign")->value > 0.0);
    CHECK(find_check(r2, "CO(ii).2 JSR")->pass);
  }

  TEST_CASE("kappa1 < 0 whenever k = 1 or p = 1") {
    std::mt19937_64 rng(41);
    int n = 0;
    for (int rep = 0; rep < 50; ++rep) {
      const bool univariate = rep % 2 == 0;
      const int p = univariate ? 1 : 2 + rep % 3, k = univariate ? 1 + rep % 4 : 1;
      CksvarModel m = fx::random_case1(rng, p, k);
      Case1Objects o = projection_case1(vecm_decompose(m));
      CHECK(o.kappa1 < 0.0);
      ++n;
    }
    CHECK(n == 50);
  }

  TEST_CASE("an intercept outside span Pi fails the deterministic check") {
    AssumptionReport r = verify_assumptions(build_example("univariate_tobit", {{"c", 0.5}}));
    CHECK_FALSE(r.deterministic_ok);
    CHECK_FALSE(r.all_ok());
    AssumptionReport ok = verify_assumptions(build_example("univariate_tobit"));
    CHECK(ok.deterministic_ok);
    CHECK(ok.cvar_roots_ok);
    CHECK(ok.q_plus == 1);
    CHECK(ok.q_minus == 0);
  }

  TEST_CASE("case (ii) set: linear model gives its companion radius") {
    // Differenced AR(2) in Delta y with a unit root: both regimes equal.
    CksvarModel m = build_example("univariate_tobit",
                                  {{"k", 2}, {"phi1_plus", 1.4}, {"phi2_plus", -0.4}, {"phi1_minus", 1.4}, {"phi2_minus", -0.4}});
    VecmForm v = vecm_decompose(m);
    CompanionSet s = build_case2_set(v);
    JsrEstimate e = jsr_bounds(s, 20);
    CHECK(std::abs(e.upper - 0.4) < 1e-3);
    CHECK(std::abs(e.lower - 0.4) < 1e-3);
  }
}
