#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "shortpath/eigensolve.hpp"
#include "test_helpers.hpp"

using namespace sp;

TEST_CASE("micro-instance closed forms") {
  Instance inst = th::i2();
  HsParams p(1.0, 1.0, 3);
  auto [e, v] = ground(inst, p, Mode::even);
  CHECK(e == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));
  CHECK(gap(inst, p, Mode::even) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
  CHECK(eq_ground(inst, p, Mode::even) == doctest::Approx(1.0).epsilon(1e-10));
  // sign-fixed Perron vector: strictly positive
  for (double a : v.a) CHECK(a > 0.0);
}

TEST_CASE("diagonal endpoints") {
  Instance inst = th::i2();
  auto [e0, v0] = ground(inst, HsParams(0.0, 1.0, 3), Mode::even);
  CHECK(e0 == -1.0);
  CHECK(v0.a[0] == 1.0);
  CHECK(gap(inst, HsParams(0.0, 1.0, 3), Mode::even) == 2.0);
  auto [eb, vb] = ground(inst, HsParams(1.0, 0.0, 3), Mode::even);
  CHECK(eb == -1.0);
  CHECK(eq_ground(inst, HsParams(0.0, 1.0, 3), Mode::even) == 1.0);  // first excited of H_Z
}

TEST_CASE("lanczos agrees with dense diagonalization") {
  for (auto [n, d, m, seed] : {std::tuple{6, 2, 8, 51ull}, {5, 3, 7, 52ull}, {7, 2, 10, 53ull}}) {
    Instance inst = random_instance(n, d, m, {-1, 1}, seed);
    Mode mode = mode_for(inst, "auto");
    HsParams p(1.0, 0.4 * inst.j_tot(), 3);
    auto dense = dense_hs_matrix(inst, p, mode);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    auto [e, v] = ground(inst, p, mode);
    CHECK(e == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-9));
    const double g = gap(inst, p, mode);
    CHECK(g == doctest::Approx(es.eigenvalues()(1) - es.eigenvalues()(0)).epsilon(1e-8));
    double ov = 0.0;
    for (size_t i = 0; i < v.dim(); ++i) ov += v.a[i] * es.eigenvectors()(i, 0);
    CHECK(std::fabs(ov) > 1.0 - 1e-8);
  }
}

TEST_CASE("perron ground vector is strictly positive") {
  for (auto [n, d, seed] : {std::tuple{6, 2, 61ull}, {8, 2, 62ull}, {5, 3, 63ull}}) {
    Instance inst = random_instance(n, d, n + 2, {-1, 1}, seed);
    Mode mode = mode_for(inst, "auto");
    HsParams p(1.0, 0.3 * inst.j_tot(), 3);
    auto [e, v] = ground(inst, p, mode, {1e-11, 600, 4, 1});
    for (double a : v.a) CHECK(a >= 1e-14);
  }
}

TEST_CASE("variational bound at s=1") {
  for (uint64_t seed : {71ull, 72ull, 73ull}) {
    Instance inst = random_instance(8, 2, 12, {-1, 1}, seed);
    auto h = histogram(inst);
    auto [e, v] = ground(inst, HsParams(1.0, 1.5, 3), Mode::even);
    CHECK(e <= (double)h.e0 + 1e-9);
  }
}

TEST_CASE("eq_ground requires the degeneracy assumption") {
  // two decoupled pairs: fourfold-degenerate ground
  Instance inst(4, 2, {{{0, 1}, -1}, {{2, 3}, -1}});
  CHECK_THROWS_AS(eq_ground(inst, HsParams(1.0, 1.0, 3), Mode::even), PreconditionError);
  try {
    eq_ground(inst, HsParams(1.0, 1.0, 3), Mode::even);
  } catch (const PreconditionError& e) {
    // names the degenerate configurations
    CHECK(std::string(e.what()).find("0000") != std::string::npos);
  }
}

TEST_CASE("eq_ground monotone in s and the gap lemma") {
  uint64_t used = 0;
  Instance inst = th::degenerate_free_instance(8, 2, 12, 81, &used);
  Mode mode = Mode::even;
  auto hist = histogram(inst);
  HsParams base(1.0, 0.2 * std::fabs((double)hist.e0), 3);
  double prev = 1e300;
  for (double s : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    HsParams p(s, base.big_b, base.k);
    const double eq = eq_ground(inst, p, mode);
    CHECK(eq <= prev + 1e-8);
    prev = eq;
    const double rhs = eq - (double)hist.e0;
    if (rhs > 1e-9) CHECK(gap(inst, p, mode) >= rhs - 1e-8);
  }
}

TEST_CASE("qgood implies a gap of at least one half") {
  uint64_t used = 0;
  Instance inst = th::degenerate_free_instance(8, 2, 12, 91, &used);
  auto rep = spectral_report(inst, HsParams(1.0, 0.2 * inst.j_tot(), 3), Mode::even);
  if (rep.qgood_flag && rep.moment_flag) CHECK(rep.gap >= 0.5 - 1e-9);
}

TEST_CASE("lowest eigenpairs against dense spectra") {
  Instance inst = random_instance(6, 2, 8, {-1, 1}, 101);
  HsParams p(1.0, 1.1, 3);
  auto dense = dense_hs_matrix(inst, p, Mode::even);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  auto pairs = lowest_eigenpairs(inst, p, Mode::even, 4);
  REQUIRE(pairs.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(pairs[i].first == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-8));
  // ceiling stops the sweep early: only eigenvalues below it are returned
  auto below = lowest_eigenpairs(inst, p, Mode::even, 16, es.eigenvalues()(2) - 1e-6);
  CHECK(below.size() == 2);
}

TEST_CASE("path scan flags and csv shape") {
  Instance inst = th::i2();
  auto scan = path_scan(inst, 1.0, 3, {0.0, 0.5, 1.0}, Mode::even);
  REQUIRE(scan.points.size() == 3);
  for (const auto& pt : scan.points) CHECK(pt.eq_ground == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(scan.monotonicity_violations.empty());
  auto csv = path_scan_csv(scan);
  CHECK(csv.find("s,e_ground,gap,eq_ground,qgood_flag,moment_flag") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK_THROWS_AS(path_scan(inst, 1.0, 3, {0.5, 0.2}, Mode::even), InputError);
}

TEST_CASE("spectral report fields on the micro-instance") {
  auto rep = spectral_report(th::i2(), HsParams(1.0, 1.0, 3), Mode::even);
  CHECK(rep.e0 == -1);
  CHECK(rep.qgood_flag);          // E^Q = 1 >= -0.5
  CHECK_FALSE(rep.moment_flag);   // B^2 <0|(X/2)^6|0> = 1 > 1/2 in the even block
  CHECK(rep.moment_2k == doctest::Approx(1.0));
}
