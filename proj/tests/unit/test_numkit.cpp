#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "embedlab/error.hpp"
#include "embedlab/numkit.hpp"

using namespace embedlab;

namespace {

RealMatrix z1() {
  RealMatrix z(3, 3);
  z << -2, 1, 1, 0, -1, 1, 0, 0, 0;
  return z;
}

RealMatrix mat2(double a, double b, double c, double d) {
  RealMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE("numkit.eig") {
  TEST_CASE("identity is flagged repeated") {
    const auto e = eig(RealMatrix::Identity(3, 3));
    REQUIRE(e.size() == 3);
    for (const auto& v : e.eigenvalues) CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-12);
    CHECK(e.repeated);
    CHECK(e.min_pairwise_gap < 1e-12);
    CHECK(e.cluster[0] == e.cluster[1]);
    CHECK(e.cluster[1] == e.cluster[2]);
  }

  TEST_CASE("exp(Z1) has its diagonal as spectrum, in descending order") {
    const auto e = eig(z1().exp());
    CHECK(std::abs(e.eigenvalues[0] - 1.0) < 1e-12);
    CHECK(std::abs(e.eigenvalues[1] - std::exp(-1.0)) < 1e-12);
    CHECK(std::abs(e.eigenvalues[2] - std::exp(-2.0)) < 1e-12);
    CHECK_FALSE(e.repeated);
    CHECK(e.residual < 1e-12);
  }

  TEST_CASE("rotation gives a conjugate pair, negative imaginary part first") {
    const auto e = eig(mat2(0, 1, -1, 0));
    CHECK(e.eigenvalues[0] == Complex(0.0, -1.0));
    CHECK(e.eigenvalues[1] == Complex(0.0, 1.0));
    CHECK(e.conjugate_partner[0] == 1);
    CHECK(e.conjugate_partner[1] == 0);
    CHECK_FALSE(e.is_real(0));
  }

  TEST_CASE("min_pairwise_gap matches the brute-force minimum") {
    testkit::Rng rng(11);
    for (int t = 0; t < 50; ++t) {
      const RealMatrix a = testkit::random_nonnegative(rng, 2 + t % 5);
      const auto e = eig(a);
      double gap = INFINITY;
      for (int i = 0; i < e.size(); ++i)
        for (int j = i + 1; j < e.size(); ++j) gap = std::min(gap, std::abs(e.eigenvalues[i] - e.eigenvalues[j]));
      CHECK(e.min_pairwise_gap == doctest::Approx(gap).epsilon(1e-12));
    }
  }

  TEST_CASE("1x1 input has infinite gap") {
    const auto e = eig(RealMatrix::Constant(1, 1, 0.5));
    CHECK(std::isinf(e.min_pairwise_gap));
    CHECK_FALSE(e.repeated);
  }

  TEST_CASE("bad input is rejected") {
    CHECK_THROWS_AS(eig(RealMatrix(2, 3)), Error);
    RealMatrix nan = RealMatrix::Identity(2, 2);
    nan(0, 1) = NAN;
    CHECK_THROWS_AS(eig(nan), Error);
  }

  TEST_CASE("a Jordan block is flagged ill-conditioned") {
    const auto e = eig(mat2(1, 1, 0, 1));
    CHECK(e.ill_conditioned());
    CHECK_THROWS_AS(require_well_conditioned(e), Error);
  }
}

TEST_SUITE("numkit.expm") {
  TEST_CASE("zero matrix gives the identity") {
    CHECK(expm(RealMatrix::Zero(4, 4)).isApprox(RealMatrix::Identity(4, 4), 1e-15));
  }

  TEST_CASE("Z1 matches the three-decimal table") {
    RealMatrix table(3, 3);
    table << 0.135, 0.233, 0.632, 0, 0.368, 0.632, 0, 0, 1;
    CHECK((expm(z1()) - table).cwiseAbs().maxCoeff() < 5e-4);
  }

  TEST_CASE("symmetric two-state generator") {
    const double e2 = std::exp(-2.0);
    const RealMatrix want = mat2((1 + e2) / 2, (1 - e2) / 2, (1 - e2) / 2, (1 + e2) / 2);
    CHECK(testkit::rel_err(expm(mat2(-1, 1, 1, -1)), want) < 1e-14);
    CHECK(want(0, 0) == doctest::Approx(0.5677).epsilon(1e-4));
  }

  TEST_CASE("two-state closed form across every Pade degree") {
    // Scaling t sweeps the norm through each approximant threshold.
    for (double t : {1e-4, 1e-2, 0.1, 0.4, 1.0, 2.5, 5.0, 40.0, 900.0}) {
      const double a = 0.3;
      const double b = 0.7;
      const RealMatrix got = expm(t * mat2(-a, a, b, -b));
      CHECK(testkit::rel_err(got, testkit::oracle_expm_2state(a, b, t)) < 1e-13);
    }
  }

  TEST_CASE("agrees with Eigen's exponential on random dense input") {
    testkit::Rng rng(5);
    for (int t = 0; t < 200; ++t) {
      const int n = 1 + t % 7;
      RealMatrix a = RealMatrix::Random(n, n) * testkit::uniform(rng, 0.001, 12.0);
      CHECK(testkit::rel_err(expm(a), testkit::oracle_expm(a)) < 1e-11);
    }
  }

  TEST_CASE("overflow is reported") {
    CHECK_THROWS_AS(expm(RealMatrix::Constant(2, 2, 1e6)), Error);
  }
}

TEST_SUITE("numkit.logm") {
  TEST_CASE("identity, principal offsets, gives zero") {
    const auto z = logm_branch(eig(RealMatrix::Identity(3, 3)), BranchSelection::principal(3));
    CHECK(z.cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("repeated cluster with split offsets is refused") {
    CHECK_THROWS_AS(logm_branch(eig(RealMatrix::Identity(2, 2)), BranchSelection{{1, -1}}), Error);
  }

  TEST_CASE("two-state principal log matches the closed form") {
    const RealMatrix p = mat2(0.9, 0.1, 0.2, 0.8);
    const auto z = logm_branch(eig(p), BranchSelection::principal(2));
    const auto real = real_if_real(z, {});
    REQUIRE(real);
    CHECK(testkit::rel_err(*real, testkit::oracle_log_2state(0.1, 0.2)) < 1e-12);
    CHECK((*real)(0, 1) == doctest::Approx(0.11889).epsilon(1e-4));
    CHECK((*real)(1, 0) == doctest::Approx(0.23778).epsilon(1e-4));
  }

  TEST_CASE("principal log of E2 E1 has a negative off-diagonal") {
    RealMatrix z2(3, 3);
    z2 << -0.5, 1.0 / 12, 5.0 / 12, 0, -3, 3, 0, 0, 0;
    const RealMatrix p = expm(z2) * expm(z1());
    const auto real = real_if_real(logm_branch(eig(p), BranchSelection::principal(3)), {});
    REQUIRE(real);
    CHECK(testkit::rel_err(*real, testkit::oracle_log_triangular(p)) < 1e-10);
    CHECK((*real)(0, 2) < -0.9);
  }

  TEST_CASE("triangular Parlett oracle on random upper-triangular input") {
    testkit::Rng rng(23);
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + t % 4;
      RealMatrix u = RealMatrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        u(i, i) = 0.2 + 0.8 * (i + testkit::uniform(rng, 0.1, 0.9)) / n;
        for (int j = i + 1; j < n; ++j) u(i, j) = testkit::uniform(rng, 0.0, 0.3);
      }
      const auto real = real_if_real(logm_branch(eig(u), BranchSelection::principal(n)), {});
      REQUIRE(real);
      CHECK(testkit::rel_err(*real, testkit::oracle_log_triangular(u)) < 1e-9);
      CHECK(testkit::rel_err(logm_principal(u), testkit::oracle_log_triangular(u)) < 1e-9);
    }
  }

  TEST_CASE("rotation by pi/3 and its conjugate branches") {
    const double c = std::cos(M_PI / 3);
    const double s = std::sin(M_PI / 3);
    const RealMatrix r = mat2(c, -s, s, c);
    const auto e = eig(r);
    const auto principal = real_if_real(logm_branch(e, BranchSelection::principal(2)), {});
    REQUIRE(principal);
    CHECK(testkit::rel_err(expm(*principal), r) < 1e-12);
    // opposite offsets on a conjugate pair stay real; equal offsets do not
    CHECK(real_if_real(logm_branch(e, BranchSelection{{1, -1}}), {}));
    CHECK_FALSE(real_if_real(logm_branch(e, BranchSelection{{1, 1}}), {}));
  }

  TEST_CASE("singular and negative-eigenvalue inputs") {
    CHECK_THROWS_AS(logm_branch(eig(mat2(1, 0, 0, 0)), BranchSelection::principal(2)), Error);
    try {
      logm_principal(mat2(-1, 0, 0, 2));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NegativeRealEigenvalue);
    }
    CHECK_THROWS_AS(logm_branch(eig(mat2(1, 0, 0, 2)), BranchSelection{{0}}), Error);
  }

  TEST_CASE("reality threshold scales with size and magnitude") {
    ComplexMatrix z = ComplexMatrix::Zero(3, 3);
    z(0, 0) = Complex(100.0, 0.0);
    CHECK(reality_threshold(z, {}) == doctest::Approx(3 * 1e-9 * 101));
    z(1, 2) = Complex(0.0, 2e-7);
    CHECK(real_if_real(z, {}));
    z(1, 2) = Complex(0.0, 4e-7);
    CHECK_FALSE(real_if_real(z, {}));
  }
}

TEST_SUITE("numkit.primary_root") {
  TEST_CASE("n = 1 is the identity map") {
    const RealMatrix a = mat2(0.9, 0.1, 0.2, 0.8);
    CHECK(primary_root(a, 1) == a);
  }

  TEST_CASE("square root of 4I") {
    CHECK(primary_root(4.0 * RealMatrix::Identity(3, 3), 2).isApprox(2.0 * RealMatrix::Identity(3, 3), 1e-14));
  }

  TEST_CASE("square root of E1") {
    const RealMatrix e1 = expm(z1());
    const RealMatrix r = primary_root(e1, 2);
    CHECK(r(1, 0) == 0.0);
    CHECK(std::abs(r(2, 0)) < 1e-15);
    CHECK(std::abs(r(2, 1)) < 1e-15);
    CHECK(r(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(r(1, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(r(2, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(testkit::rel_err(r * r, e1) < 1e-8);
    CHECK(testkit::rel_err(r, expm(z1() / 2.0)) < 1e-12);
  }

  TEST_CASE("defective input falls back to the Schur route") {
    const RealMatrix j = mat2(4, 1, 0, 4);
    const RealMatrix r = primary_root(j, 2);
    CHECK(testkit::rel_err(r * r, j) < 1e-12);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(primary_root(mat2(1, 0, 0, 2), 0), Error);
    CHECK_THROWS_AS(primary_root(mat2(-1, 0, 0, 2), 2), Error);
    CHECK_THROWS_AS(primary_root(mat2(1, 0, 0, 0), 2), Error);
  }
}

TEST_SUITE("numkit.perturb_distinct") {
  TEST_CASE("distinct input comes back untouched") {
    const RealMatrix a = mat2(0.9, 0.1, 0.2, 0.8);
    CHECK(perturb_distinct(a) == a);
  }

  TEST_CASE("2x2 identity separates within 1e-6") {
    PerturbOptions opts;
    opts.keep_stochastic = false;
    const RealMatrix p = perturb_distinct(RealMatrix::Identity(2, 2), {}, opts);
    CHECK((p - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(testkit::min_eigen_gap(p) >= ToleranceConfig{}.distinct_tol);
  }

  TEST_CASE("stochastic identity cannot be perturbed without breaking its pattern") {
    // Diagonal shifts would change row sums and there is no off-diagonal
    // entry to compensate with.
    try {
      perturb_distinct(RealMatrix::Identity(2, 2));
      FAIL("expected PerturbationFailed");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PerturbationFailed);
    }
  }

  TEST_CASE("repeated 1/2 in the diagonal-scaling matrix") {
    RealMatrix b(3, 3);
    b << 0.4, 0.4, 0.2, 0, 0.5, 0.5, 0, 0, 0.5;
    const RealMatrix p = perturb_distinct(b);
    CHECK(testkit::min_eigen_gap(p) >= ToleranceConfig{}.distinct_tol);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK((std::abs(p(i, j)) > 1e-9) == (std::abs(b(i, j)) > 1e-9));
    CHECK(p(0, 0) != p(1, 1));
    CHECK(p(1, 1) != p(2, 2));
  }

  TEST_CASE("stochastic input with a repeated eigenvalue stays stochastic") {
    RealMatrix p(3, 3);
    p << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;  // eigenvalues 1, 1/4, 1/4
    const RealMatrix q = perturb_distinct(p);
    CHECK(testkit::min_eigen_gap(q) >= ToleranceConfig{}.distinct_tol);
    CHECK((q.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(q.minCoeff() >= 0.0);
    CHECK((q - p).cwiseAbs().maxCoeff() <= 1e-6 * (1 + 1.0));
  }

  TEST_CASE("seeded and deterministic") {
    RealMatrix p(3, 3);
    p << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    CHECK(perturb_distinct(p) == perturb_distinct(p));
  }
}
