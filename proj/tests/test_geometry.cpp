#include <doctest.h>

#include <cmath>

#include "cpca/geometry.hpp"
#include "oracles.hpp"

using namespace cpca;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("omega maps angles onto the unit sphere") {
  SUBCASE("q = 1 axis cases") {
    Eigen::VectorXd t(1);
    t << 0.0;
    const Direction d0 = omega(SphericalAngles(t));
    CHECK(d0[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d0[1] == doctest::Approx(0.0).epsilon(1e-15));
    t << M_PI / 2;
    const Direction d1 = omega(SphericalAngles(t));
    CHECK(d1[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d1[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("q = 2 against the explicit three-term formula") {
    const double t1 = M_PI / 3, t2 = M_PI / 4;
    Eigen::VectorXd t(2);
    t << t1, t2;
    const Direction d = omega(SphericalAngles(t));
    CHECK(d[0] == doctest::Approx(std::cos(t1)).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(std::sin(t1) * std::cos(t2)).epsilon(1e-14));
    CHECK(d[2] == doctest::Approx(std::sin(t1) * std::sin(t2)).epsilon(1e-14));
    CHECK(d[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(0.6123724356957945).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(0.6123724356957945).epsilon(1e-12));
  }
  SUBCASE("unit norm for arbitrary angles") {
    auto gen = oracle::rng(11);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    for (int rep = 0; rep < 1000; ++rep) {
      const int q = 1 + static_cast<int>(gen() % 7);
      Eigen::VectorXd t(q);
      for (int i = 0; i < q; ++i) t[i] = unif(gen);
      CHECK(std::abs(omega(SphericalAngles(t)).vector().norm() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("angles_of inverts omega") {
  Eigen::VectorXd e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  CHECK(angles_of(Direction(e1))[0] == doctest::Approx(0.0));
  CHECK(angles_of(Direction(e2))[0] == doctest::Approx(M_PI / 2));

  auto gen = oracle::rng(12);
  for (int rep = 0; rep < 500; ++rep) {
    const int dim = 2 + static_cast<int>(gen() % 7);
    const Direction p(oracle::random_unit(gen, dim));
    const Direction back = omega(angles_of(p));
    CHECK((back.vector() - p.vector()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK_THROWS_AS(angles_of(Direction(one)), std::invalid_argument);
}

TEST_CASE("omega_jacobian matches finite differences") {
  auto gen = oracle::rng(13);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int q = 1 + static_cast<int>(gen() % 5);
    Eigen::VectorXd t(q);
    for (int i = 0; i < q; ++i) t[i] = unif(gen);
    const Eigen::MatrixXd jac = omega_jacobian(SphericalAngles(t));
    const double h = 1e-6;
    for (int j = 0; j < q; ++j) {
      Eigen::VectorXd tp = t, tm = t;
      tp[j] += h;
      tm[j] -= h;
      const Eigen::VectorXd fd =
          (omega(SphericalAngles(tp)).vector() - omega(SphericalAngles(tm)).vector()) / (2 * h);
      CHECK((jac.col(j) - fd).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("orthonormal_complement") {
  SUBCASE("single axis in R^3") {
    Eigen::MatrixXd prev(3, 1);
    prev << 1.0, 0.0, 0.0;
    const OrthonormalBasis comp = orthonormal_complement(OrthonormalBasis(prev));
    REQUIRE(comp.count() == 2);
    CHECK((comp.columns().transpose() * prev).cwiseAbs().maxCoeff() <= 1e-10);
    // Columns span {e2, e3}: no e1 component anywhere.
    CHECK(comp.columns().row(0).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("empty previous gives the identity") {
    const OrthonormalBasis comp = orthonormal_complement(OrthonormalBasis::empty(4));
    CHECK(comp.columns() == Eigen::MatrixXd::Identity(4, 4));
  }
  SUBCASE("random direction in R^6") {
    auto gen = oracle::rng(14);
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::MatrixXd prev(6, 1);
      prev.col(0) = oracle::random_unit(gen, 6);
      const OrthonormalBasis comp = orthonormal_complement(OrthonormalBasis(prev));
      REQUIRE(comp.count() == 5);
      Eigen::MatrixXd gram = comp.columns().transpose() * comp.columns();
      gram -= Eigen::MatrixXd::Identity(5, 5);
      CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((comp.columns().transpose() * prev).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("full basis has no complement") {
    CHECK_THROWS_AS(orthonormal_complement(OrthonormalBasis(Eigen::MatrixXd::Identity(3, 3))),
                    std::invalid_argument);
  }
  SUBCASE("deterministic for fixed input") {
    auto gen = oracle::rng(15);
    Eigen::MatrixXd prev(5, 2);
    prev.col(0) = oracle::random_unit(gen, 5);
    Eigen::VectorXd second = oracle::random_unit(gen, 5);
    second -= prev.col(0).dot(second) * prev.col(0);
    prev.col(1) = second / second.norm();
    const OrthonormalBasis a = orthonormal_complement(OrthonormalBasis(prev));
    const OrthonormalBasis b = orthonormal_complement(OrthonormalBasis(prev));
    CHECK(a.columns() == b.columns());
  }
}

TEST_CASE("PolyhedralSet validation and membership") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2);
  const PolyhedralSet octant(a, b);
  CHECK(octant.contains(Eigen::Vector2d(1.0, 1.0)));
  CHECK(octant.contains(Eigen::Vector2d(-1e-10, 0.5)));  // inside the tolerance band
  CHECK(!octant.contains(Eigen::Vector2d(-1e-3, 0.5)));

  SUBCASE("zero rows rejected regardless of b") {
    Eigen::MatrixXd bad(1, 2);
    bad << 0.0, 0.0;
    CHECK_THROWS_AS(PolyhedralSet(bad, Eigen::VectorXd::Constant(1, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(PolyhedralSet(bad, Eigen::VectorXd::Constant(1, -1.0)),
                    std::invalid_argument);
  }
  SUBCASE("shape mismatch rejected") {
    CHECK_THROWS_AS(PolyhedralSet(a, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  }
  SUBCASE("box factory") {
    const PolyhedralSet box = PolyhedralSet::box(3, -1.0, 2.0);
    CHECK(box.constraint_count() == 6);
    CHECK(box.contains(Eigen::Vector3d(0.0, -1.0, 2.0)));
    CHECK(!box.contains(Eigen::Vector3d(0.0, 0.0, 2.1)));
  }
}

TEST_CASE("Direction and OrthonormalBasis invariants") {
  Eigen::VectorXd v(2);
  v << 3.0, 4.0;
  CHECK_THROWS_AS(Direction{v}, std::invalid_argument);
  const Direction unit = Direction::normalized(v);
  CHECK(unit[0] == doctest::Approx(0.6));
  CHECK(unit[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(Direction::normalized(Eigen::VectorXd::Zero(3)), std::invalid_argument);

  Eigen::MatrixXd skew(2, 2);
  skew << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(OrthonormalBasis{skew}, std::invalid_argument);
}

TEST_SUITE_END();
