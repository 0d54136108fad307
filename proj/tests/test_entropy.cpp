#include <cmath>

#include "doctest.h"
#include "shortpath/entropy.hpp"
#include "test_helpers.hpp"

using namespace sp;

TEST_CASE("binary entropy and its lower-branch inverse") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(inv_binary_entropy(0.5) == doctest::Approx(0.1100279).epsilon(1e-6));
  CHECK(inv_binary_entropy(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(inv_binary_entropy(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(binary_entropy(1.5), InputError);
  CHECK_THROWS_AS(inv_binary_entropy(-0.1), InputError);
}

TEST_CASE("tau endpoints, example value, and the composition identity") {
  CHECK(tau(0.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(tau(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tau(0.5) == doctest::Approx(0.6258).epsilon(1e-3));
  for (int i = 0; i <= 200; ++i) {
    const double sigma = i / 200.0;
    CHECK(tau_inv(tau(sigma)) == doctest::Approx(sigma).epsilon(1e-9));
  }
  // strictly increasing on a grid
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = tau(i / 1000.0);
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("tau small-sigma scaling band") {
  // tau(sigma)^2 (-log2 sigma)/sigma stays in a fixed positive band
  double lo = 1e300, hi = 0.0;
  for (double sigma = 1e-6; sigma <= 1e-3; sigma *= 2.0) {
    const double t = tau(sigma);
    const double r = t * t * (-std::log2(sigma)) / sigma;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo > 1.0);
  CHECK(hi < 10.0);
  CHECK(hi / lo < 3.0);  // bounded band, constants not asserted
}

TEST_CASE("log-Sobolev checks on extremal states") {
  auto plus = check_lsi(plus_state(5, Mode::full));
  CHECK(plus.lsi1_ok);
  CHECK(plus.lsi2_ok);
  CHECK(plus.s_comp == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::fabs(plus.lsi1_slack) < 1e-9);  // equality
  CHECK(std::fabs(plus.lsi2_slack) < 1e-9);

  auto basis = check_lsi(basis_state(5, Mode::full, 9));
  CHECK(basis.lsi1_ok);
  CHECK(basis.lsi2_ok);
  CHECK(basis.s_comp == 0.0);
  CHECK(std::fabs(basis.lsi2_slack) < 1e-12);  // tau(0) = 0 = <X>/N
  CHECK(basis.lsi1_slack > 1.0);               // strict for N >= 4
}

TEST_CASE("log-Sobolev holds for random unit vectors") {
  for (int n : {4, 6, 8}) {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      auto c = check_lsi(th::random_unit_state(n, Mode::full, 1000 * n + seed));
      CHECK(c.lsi1_ok);
      CHECK(c.lsi2_ok);
    }
  }
  // even-mode states too
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto c = check_lsi(th::random_unit_state(8, Mode::even, 9000 + seed));
    CHECK(c.lsi1_ok);
    CHECK(c.lsi2_ok);
  }
}

TEST_CASE("maxwell decomposition on the micro-instance") {
  auto hist = histogram(th::i2());
  std::map<int64_t, double> p{{-1, 0.5}, {1, 0.5}};
  std::map<int64_t, double> s{{-1, 1.0}, {1, 1.0}};  // each level has W = 2
  auto d = maxwell_decompose(hist, p, s);
  CHECK(d.e1 == -1);
  CHECK(d.e2 == 1);
  CHECK(d.p == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.achieved_entropy_bound == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.p * d.e1 + (1 - d.p) * d.e2 == doctest::Approx(d.mean).epsilon(1e-9));
}

TEST_CASE("maxwell point distribution") {
  auto hist = histogram(th::i2());
  std::map<int64_t, double> p{{-1, 1.0}};
  std::map<int64_t, double> s{{-1, 0.3}};
  auto d = maxwell_decompose(hist, p, s);
  CHECK(d.e1 == -1);
  CHECK(d.e2 == -1);
  CHECK(d.p == 1.0);
  CHECK(d.achieved_entropy_bound == doctest::Approx(1.0));  // log2 W(-1) = 1
}

TEST_CASE("maxwell input validation") {
  auto hist = histogram(th::i2());
  std::map<int64_t, double> bad_sum{{-1, 0.4}, {1, 0.4}};
  CHECK_THROWS_AS(maxwell_decompose(hist, bad_sum, {}), InputError);
  std::map<int64_t, double> off_support{{0, 1.0}};
  CHECK_THROWS_AS(maxwell_decompose(hist, off_support, {}), InputError);
  std::map<int64_t, double> p{{-1, 1.0}};
  std::map<int64_t, double> s_too_big{{-1, 2.0}};  // log2 W(-1) = 1
  CHECK_THROWS_AS(maxwell_decompose(hist, p, s_too_big), InputError);
}

TEST_CASE("entropy chain identity and the two-point bound") {
  for (uint64_t seed = 300; seed < 310; ++seed) {
    Instance inst = random_instance(8, 2, 12, {-1, 1}, seed);
    Mode mode = Mode::even;
    StateVector v = th::random_unit_state(8, mode, seed);
    auto dist = energy_distribution(inst, v);
    double cond = 0.0;
    for (auto& [e, pe] : dist.p_of_e) cond += pe * dist.s_of_e.at(e);
    CHECK(s_comp(v) == doctest::Approx(dist.marginal_entropy + cond).epsilon(1e-9));

    auto hist = histogram(inst);
    auto d = maxwell_decompose(hist, dist.p_of_e, dist.s_of_e);
    CHECK(d.achieved_entropy_bound >= cond - 1e-9);
    // marginal entropy capped by the number of attainable energies
    CHECK(dist.marginal_entropy <= std::log2(2.0 * inst.j_tot() + 1.0) + 1e-12);
  }
}

TEST_CASE("qbad certificate on extremal inputs") {
  Instance inst = th::i2();
  HsParams p(1.0, 1.0, 3);
  auto plus_cert = qbad_certificate(inst, p, plus_state(2, Mode::even), 0.01);
  CHECK(plus_cert.s_comp == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(plus_cert.x_expect == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(plus_cert.x0 == doctest::Approx(2.0));
  CHECK(plus_cert.bound_satisfied);
  CHECK(plus_cert.entropy_bound <= 2.0 + 1e-9);

  // a basis state has full X-support centered at 0: vacuous certificate
  auto basis_cert = qbad_certificate(inst, p, basis_state(2, Mode::even, 0), 0.01);
  CHECK(basis_cert.vacuous);
  CHECK(basis_cert.bound_satisfied);  // bound clamps to 0 <= S
  CHECK(basis_cert.x0 == doctest::Approx(0.0));
}
