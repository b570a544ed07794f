#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pffw/sets.hpp"

using namespace pffw;

TEST_SUITE_BEGIN("sets");

TEST_CASE("l1 projection leaves feasible points alone") {
  EasySet s = EasySet::l1_ball(2, 1.0);
  VectorXd y(2);
  y << 0.2, 0.3;
  CHECK((s.project(y) - y).norm() == 0.0);
}

TEST_CASE("l1 projection single-axis case") {
  EasySet s = EasySet::l1_ball(2, 1.0);
  VectorXd y(2);
  y << 3.0, 0.0;
  VectorXd p = s.project(y);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("l1 projection matches the sign-pattern enumeration oracle") {
  Rng rng(0x5e75);
  for (Index d : {2, 3, 4, 5}) {
    EasySet s = EasySet::l1_ball(d, 1.0);
    for (int t = 0; t < 200; ++t) {
      VectorXd y = oracles::rand_vec(rng, d, 1.5);
      VectorXd got = s.project(y);
      VectorXd ref = oracles::brute_l1_project(y, 1.0);
      CHECK((got - ref).norm() < 1e-6);
    }
  }
}

TEST_CASE("nonneg orthant clamps") {
  EasySet s = EasySet::nonneg_orthant(2);
  VectorXd y(2);
  y << -1.0, 2.0;
  VectorXd p = s.project(y);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 2.0);
}

TEST_CASE("fixed point distance at the point is zero") {
  VectorXd b(3);
  b << 1.0, -2.0, 0.5;
  EasySet s = EasySet::fixed_point(b);
  CHECK(s.distance(b) == 0.0);
  CHECK((s.project(b * 0.0) - b).norm() == 0.0);
}

TEST_CASE("halfspace distance equals the normalized violation") {
  VectorXd a(2);
  a << 1.0, 0.0;
  EasySet s = EasySet::halfspace(a, 0.0);
  VectorXd y(2);
  y << 2.0, 0.0;
  CHECK(s.distance(y) == doctest::Approx(2.0).epsilon(1e-12));
  VectorXd inside(2);
  inside << -1.0, 5.0;
  CHECK(s.distance(inside) == 0.0);
}

TEST_CASE("hyperplane projection lands on the plane") {
  Rng rng(5);
  VectorXd c = oracles::rand_vec(rng, 4);
  EasySet s = EasySet::hyperplane(c, 1.5);
  VectorXd y = oracles::rand_vec(rng, 4, 2.0);
  VectorXd p = s.project(y);
  CHECK(c.dot(p) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(s.distance(p) < 1e-10);
}

TEST_CASE("product distance is the rms of blockwise distances") {
  Rng rng(17);
  std::vector<EasySet> blocks;
  blocks.push_back(EasySet::l1_ball(3, 1.0));
  blocks.push_back(EasySet::nonneg_orthant(2));
  VectorXd b(2);
  b << 1.0, 1.0;
  blocks.push_back(EasySet::fixed_point(b));
  EasySet s = EasySet::product(blocks);
  REQUIRE(s.dim() == 7);
  for (int t = 0; t < 50; ++t) {
    VectorXd y = oracles::rand_vec(rng, 7, 2.0);
    double acc = 0.0;
    acc += std::pow(blocks[0].distance(y.segment(0, 3)), 2);
    acc += std::pow(blocks[1].distance(y.segment(3, 2)), 2);
    acc += std::pow(blocks[2].distance(y.segment(5, 2)), 2);
    CHECK(s.distance(y) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
    // and the distance is realized by the projection
    CHECK((y - s.project(y)).norm() == doctest::Approx(s.distance(y)).epsilon(1e-12));
  }
}

TEST_CASE("projection is idempotent and distance vanishes exactly at fixed points") {
  Rng rng(23);
  std::vector<EasySet> sets;
  sets.push_back(EasySet::l1_ball(4, 0.8));
  sets.push_back(EasySet::nonneg_orthant(4));
  VectorXd a = oracles::rand_vec(rng, 4);
  sets.push_back(EasySet::halfspace(a, 0.3));
  sets.push_back(EasySet::hyperplane(a, -0.2));
  VectorXd b = oracles::rand_vec(rng, 4);
  sets.push_back(EasySet::fixed_point(b));
  sets.push_back(EasySet::product({sets[0], sets[1]}));

  for (const auto& s : sets) {
    for (int t = 0; t < 100; ++t) {
      VectorXd y = oracles::rand_vec(rng, s.dim(), 2.0);
      VectorXd p = s.project(y);
      CHECK((s.project(p) - p).norm() < 1e-10);
      CHECK(s.distance(p) < 1e-10);
      if (s.distance(y) < 1e-12) CHECK((p - y).norm() < 1e-10);
    }
  }
}

TEST_CASE("projections are non-expansive") {
  Rng rng(29);
  std::vector<EasySet> sets;
  sets.push_back(EasySet::l1_ball(5, 1.0));
  sets.push_back(EasySet::nonneg_orthant(5));
  VectorXd a = oracles::rand_vec(rng, 5);
  sets.push_back(EasySet::halfspace(a, 0.0));
  sets.push_back(EasySet::hyperplane(a, 1.0));
  sets.push_back(EasySet::fixed_point(oracles::rand_vec(rng, 5)));
  for (const auto& s : sets) {
    for (int t = 0; t < 1000; ++t) {
      VectorXd y1 = oracles::rand_vec(rng, 5, 2.0);
      VectorXd y2 = oracles::rand_vec(rng, 5, 2.0);
      CHECK((s.project(y1) - s.project(y2)).norm() <= (y1 - y2).norm() + 1e-12);
    }
  }
}

TEST_CASE("near_face flags the kinks and only the kinks") {
  EasySet nn = EasySet::nonneg_orthant(2);
  VectorXd y(2);
  y << 1e-8, 1.0;
  CHECK(nn.near_face(y, 1e-6));
  y << 0.5, 1.0;
  CHECK_FALSE(nn.near_face(y, 1e-6));

  // fixed points and hyperplanes have smooth squared distances everywhere
  CHECK_FALSE(EasySet::fixed_point(y).near_face(y, 1e-6));
  CHECK_FALSE(EasySet::hyperplane(y, 0.0).near_face(y, 1e-6));
}

TEST_CASE("dimension mismatches throw") {
  EasySet s = EasySet::l1_ball(3, 1.0);
  VectorXd y(2);
  y.setZero();
  CHECK_THROWS_AS(s.project(y), DimMismatch);
  CHECK_THROWS_AS(s.distance(y), DimMismatch);
}

TEST_CASE("degenerate constructions are rejected") {
  CHECK_THROWS_AS(EasySet::l1_ball(0, 1.0), DimMismatch);
  CHECK_THROWS(EasySet::l1_ball(2, 0.0));
  CHECK_THROWS(EasySet::halfspace(VectorXd::Zero(2), 0.0));
  CHECK_THROWS_AS(EasySet::product({}), EmptyStack);
}

TEST_SUITE_END();
