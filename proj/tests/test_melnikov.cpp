#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "btu/errors.hpp"
#include "btu/melnikov.hpp"
#include "oracles.hpp"

using namespace btu;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::PreconditionViolated;
}

// mpmath at 40 digits, see oracle_values.py
constexpr double kThetaStar = 1.8630981234907849005;
constexpr double kNu2Star = 2.4548889937978032099;

}  // namespace

TEST_CASE("heteroclinic Melnikov closed form") {
  CHECK(m_het_closed(0, 1, 1) == doctest::Approx(4 * std::sqrt(2.0) / 15).epsilon(1e-15));
  CHECK(m_het_closed(0, 1, 1) == doctest::Approx(0.37712361663282534635).epsilon(1e-15));
  // the nu1 term alone integrates y dt to x(+inf) - x(-inf) = 2 sqrt(nu2)
  CHECK(m_het_closed(1, 1, 0) - m_het_closed(0, 1, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m_het_closed(1, 4, 0) - m_het_closed(0, 4, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(m_het_closed(1, 1, 0) == doctest::Approx(2.0 - 0.4 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(m_het_closed(0, 5.0 / 3.0, 1)) <= 1e-15);
  CHECK(m_het_closed(0.2, 2.5, 0.7) == doctest::Approx(-2.3489684379660437288).epsilon(1e-14));
  CHECK(code_of([] { m_het_closed(0, 0, 1); }) == ErrorCode::NonPositiveNu2);
  CHECK(code_of([] { m_het_quadrature(0, -1, 1); }) == ErrorCode::NonPositiveNu2);
  // lower connection is the image under (x, y) -> (-x, -y)
  CHECK(m_het_closed_lower(0.3, 1.2, 1) == doctest::Approx(m_het_closed(-0.3, 1.2, 1)).epsilon(1e-14));
}

TEST_CASE("heteroclinic quadrature examples") {
  CHECK(m_het_quadrature(0, 1, 1) == doctest::Approx(0.37712361663282534635).epsilon(1e-10));
  CHECK(m_het_quadrature(1, 1, 0) - m_het_quadrature(0, 1, 0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(m_het_quadrature(1, 1, 0) == doctest::Approx(2.0 - 0.4 * std::sqrt(2.0)).epsilon(1e-10));
  const double expect = 2.0 / 15.0 * std::sqrt(2.0) * (7.5 - 2.0 * std::sqrt(2.0));
  CHECK(std::abs(m_het_quadrature(0.5, 2, 1) - expect) <= 1e-8 * (1 + std::abs(expect)));
}

TEST_CASE("heteroclinic closed form agrees with both oracles") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> n1(-2.0, 2.0), n2(0.1, 5.0), n3(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double a = n1(rng), b = n2(rng), c = n3(rng);
    const double closed = m_het_closed(a, b, c);
    CHECK(std::abs(closed - m_het_quadrature(a, b, c)) <= 1e-8 * (1 + std::abs(closed)));
    CHECK(std::abs(closed - oracle::het_melnikov(a, b, c)) <= 1e-8 * (1 + std::abs(closed)));
  }
}

TEST_CASE("heteroclinic curve") {
  const double r2 = std::sqrt(2.0);
  CHECK(het_mu1(0.5, -5.0 / 6.0, +1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(het_mu1(0.5, -5.0 / 6.0, -1)) <= 1e-16);
  CHECK(het_mu1(0.1, -0.2, +1) == doctest::Approx(r2 / 15 * 0.02).epsilon(1e-14));
  CHECK(het_mu1(0.1, -0.2, +1) == doctest::Approx(0.0018856).epsilon(1e-4));
  CHECK(het_mu1(0.1, -0.2, -1) == doctest::Approx(-0.0018856).epsilon(1e-4));
  CHECK(het_mu1(0.1, 0.0, +1) == 0.0);

  const auto [plus, minus] = het_curve(0.1, {-1.0, 0.0}, 101);
  REQUIRE(plus.samples.size() == 101);
  for (std::size_t i = 0; i < plus.samples.size(); ++i) {
    const auto p = plus.samples[i];
    CHECK(p.mu1 == doctest::Approx(r2 / 15 * p.mu2 * (3 * p.mu2 + 0.5)).epsilon(1e-13));
    CHECK(minus.samples[i].mu1 == -p.mu1);
  }

  // the curve is the zero set of the unscaled Melnikov function
  for (double mu2 : {-0.05, -0.12, -0.3, -0.8}) {
    const MuParams mu{het_mu1(0.1, mu2, +1), mu2, 0.1};
    const auto nu = to_nu(mu, Scaling::QuarticA);
    CHECK(std::abs(m_het_closed(nu.nu1, nu.nu2, nu.nu3)) <= 1e-12);
  }
}

TEST_CASE("homoclinic loop against the oracle") {
  const auto L = hom_loop_integrals(0.3, 1.0);
  // frozen from mpmath
  CHECK(L.melnikov == doctest::Approx(-0.10053783640384635504).epsilon(1e-11));
  CHECK(L.area == doctest::Approx(0.2206370686014638877).epsilon(1e-11));
  CHECK(L.x_bar == doctest::Approx(0.086953446702336921519).epsilon(1e-12));
  CHECK(L.s_r == doctest::Approx(0.78648254116162717424).epsilon(1e-14));

  const auto R = oracle::hom_loop(0.3, 1.0);
  CHECK(L.melnikov == doctest::Approx(R.melnikov).epsilon(1e-7));
  CHECK(L.area == doctest::Approx(R.area).epsilon(1e-7));

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> n2(0.3, 3.0), frac(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const double nu2 = n2(rng);
    const double nu1 = frac(rng) * 2.0 * std::pow(nu2 / 3.0, 1.5);
    const auto a = hom_loop_integrals(nu1, nu2);
    const auto b = oracle::hom_loop(nu1, nu2);
    CHECK(std::abs(a.melnikov - b.melnikov) <= 1e-6 * (1 + b.area));
    CHECK(a.area == doctest::Approx(b.area).epsilon(1e-6));
    CHECK(a.x_bar == doctest::Approx(b.x_bar).epsilon(1e-9));
  }

  CHECK(code_of([] { m_hom_area(1.0, 1.0); }) == ErrorCode::NoThreeEquilibria);
  CHECK(code_of([] { m_hom_area(0.3, -1.0); }) == ErrorCode::NonPositiveNu2);
}

TEST_CASE("area integral vanishes along the parametric curve") {
  for (double t : {0.3, 0.5, 1.0, 1.5, kThetaStar, 2.0, 3.0, 4.0, 5.0}) {
    CAPTURE(t);
    const auto L = hom_loop_integrals(nu1_of_theta(t), nu2_of_theta(t));
    CHECK(std::abs(L.melnikov) <= 1e-5 * L.area);
  }
  // and is nonzero once nu1 moves off it
  const double nu2 = nu2_of_theta(1.0), nu1 = nu1_of_theta(1.0);
  CHECK(std::abs(m_hom_area(0.9 * nu1, nu2)) > 1e-3);
}

TEST_CASE("printed homoclinic closed form") {
  const double f1 = hom_f1(1.0), f2 = hom_f2(1.0);
  CHECK(std::abs(m_hom_closed(1.0, -f1 / f2)) <= 1e-12 * std::abs(f1));

  const double c = std::cosh(1.0), s = std::sinh(1.0);
  const double F1 = 720 - 320 * s + 240 * c * c * c - 320 * c * c * s - 80 * c * c * c * c * s + 480 * c;
  CHECK(m_hom_closed(1.0, 0.0) == doctest::Approx(std::sqrt(2.0) * c * c / (c * c + 2) * F1).epsilon(1e-14));

  // documents the mismatch: its zero is not on the parametric curve
  CHECK(std::abs(-f1 / f2 - nu2_of_theta(1.0)) > 1e-2);
}

TEST_CASE("parametric homoclinic curve") {
  struct Row {
    double theta, nu2, nu1;
  };
  // mpmath, 40 digits
  const Row rows[] = {
      {0.001, 1.0000004761905941043, 0.38490045438848678092},
      {0.3, 1.04380619180385011, 0.40992385310158842498},
      {0.5, 1.126254284150570797, 0.45553456097951514679},
      {1.0, 1.572533161704867793, 0.66365734719222042556},
      {1.5, 2.2504722863752040587, 0.7681209930563056275},
      {3.0, 1.9219515543905206482, 0.051057233354125029446},
      {5.0, 1.6776631557711732046, 0.00078872634320944758975},
  };
  for (const auto& r : rows) {
    CAPTURE(r.theta);
    CHECK(nu2_of_theta(r.theta) == doctest::Approx(r.nu2).epsilon(1e-12));
    CHECK(nu1_of_theta(r.theta) == doctest::Approx(r.nu1).epsilon(1e-10));
  }

  SUBCASE("limits") {
    CHECK(std::abs(nu2_of_theta(0.001) - 1.0) <= 1e-3);
    CHECK(nu1_of_theta(1e-6) == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-9));
    CHECK(std::abs(nu2_of_theta(30.0) - 5.0 / 3.0) <= 1e-6);
    CHECK(std::abs(nu1_of_theta(30.0)) <= 1e-6);
  }
  SUBCASE("both sides of the series switch") {
    CHECK(nu2_of_theta(0.999999) == doctest::Approx(1.5725318977076891357).epsilon(1e-13));
    CHECK(nu2_of_theta(1.000001) == doctest::Approx(1.5725344257033731721).epsilon(1e-13));
    CHECK(nu1_of_theta(0.999999) == doctest::Approx(0.66365686569158653795).epsilon(1e-13));
    CHECK(nu1_of_theta(1.000001) == doctest::Approx(0.66365782869265159148).epsilon(1e-13));
  }
  SUBCASE("parameter invariants") {
    for (double t : {0.01, 0.2, 0.7, 1.0, 2.0, 6.0, 12.0}) {
      CAPTURE(t);
      const auto p = hom_param(t);
      CHECK(p.theta == t);
      CHECK(std::abs(std::cosh(t) - 2 * p.s_r / p.omega) <= 1e-12 * std::cosh(t));
      CHECK(std::abs(p.omega * p.omega - 2 * (p.nu2 - p.s_r * p.s_r)) <= 1e-12);
      CHECK(p.omega * p.omega > 0);
      CHECK(std::abs(p.nu1 - (p.nu2 * p.s_r - p.s_r * p.s_r * p.s_r)) <= 1e-12);
      const double c2 = std::cosh(t) * std::cosh(t);
      CHECK(std::abs(p.s_r * p.s_r - p.nu2 * c2 / (2 + c2)) <= 1e-12);
    }
  }
}

TEST_CASE("minimum of nu2 along the curve") {
  CHECK(h1(0.0) == 0.0);
  CHECK(h1(1.0) < 0.0);
  CHECK(h1(2.0) > 0.0);
  const auto m = nu2_min();
  CHECK(std::abs(m.theta_star - 1.8630981) <= 1e-6);
  CHECK(std::abs(m.theta_star - kThetaStar) <= 1e-12);
  CHECK(m.nu2_star == doctest::Approx(kNu2Star).epsilon(1e-13));
  CHECK(std::abs(h1(m.theta_star)) <= 1e-9);

  const double h = 1e-4;
  const double d = (nu2_of_theta(m.theta_star + h) - nu2_of_theta(m.theta_star - h)) / (2 * h);
  CHECK(std::abs(d) <= 1e-6);
  for (double t : {1.0, 1.5, 1.8, 1.9, 2.5, 4.0}) CHECK(nu2_of_theta(t) < m.nu2_star);

  const auto halved = nu2_min(0.5e-14);
  CHECK(std::abs(halved.theta_star - m.theta_star) <= 1e-9);
  CHECK(std::abs(nu2_min(1e-8).theta_star - nu2_min(0.5e-8).theta_star) <= 1e-8);
}

TEST_CASE("homoclinic curve") {
  const auto grid = default_theta_grid();
  REQUIRE(grid.size() == 60);
  CHECK(grid.front() == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(grid.back() == doctest::Approx(30.0).epsilon(1e-14));
  CHECK(std::is_sorted(grid.begin(), grid.end()));

  const auto [plus, minus] = hom_curve(0.1, grid);
  REQUIRE(plus.samples.size() == 60);
  REQUIRE(plus.param.size() == 60);
  const double bt = 0.01217161238900369141;
  CHECK(plus.samples.front().mu2 == doctest::Approx(-0.1).epsilon(1e-5));
  CHECK(plus.samples.front().mu1 == doctest::Approx(bt).epsilon(1e-5));
  CHECK(minus.samples.front().mu1 == doctest::Approx(-bt).epsilon(1e-5));
  CHECK(plus.samples.back().mu2 == doctest::Approx(-1.0 / 6.0).epsilon(1e-6));
  CHECK(std::abs(plus.samples.back().mu1) <= 1e-6);

  const auto [ps, ms] = hom_curve(0.1, {kThetaStar});
  CHECK(ps.samples[0].mu2 == doctest::Approx(-0.1 * kNu2Star).epsilon(1e-12));
  CHECK(ps.samples[0].mu2 == doctest::Approx(-0.24549).epsilon(1e-5));
  CHECK(ms.samples[0].mu1 == -ps.samples[0].mu1);
}

TEST_CASE("inverting nu2 on each branch") {
  for (double t : {0.05, 0.4, 1.0, 1.7}) {
    const auto back = hom_theta_for_nu2(nu2_of_theta(t), true);
    REQUIRE(back);
    CHECK(*back == doctest::Approx(t).epsilon(1e-8));
  }
  for (double t : {2.1, 3.0, 6.0}) {
    const auto back = hom_theta_for_nu2(nu2_of_theta(t), false);
    REQUIRE(back);
    CHECK(*back == doctest::Approx(t).epsilon(1e-7));
  }
  CHECK_FALSE(hom_theta_for_nu2(0.9, true));
  CHECK_FALSE(hom_theta_for_nu2(2.6, true));
  CHECK_FALSE(hom_theta_for_nu2(1.5, false));
}

TEST_CASE("region classification") {
  const double mu3 = 0.1;
  SUBCASE("deep inside the three-equilibrium zone") {
    const auto r = classify_region({0.0, -10 * mu3, mu3}).region;
    CHECK(r == Region::R1);
  }
  SUBCASE("single equilibrium") {
    CHECK(classify_region({0.5, 0.1, mu3}).region == Region::R6);
    CHECK(classify_region({0.01, -0.01, mu3}).region == Region::R6);
  }
  SUBCASE("on the heteroclinic curve") {
    CHECK(classify_region({het_mu1(mu3, -0.2, +1), -0.2, mu3}).region == Region::Boundary);
    CHECK(classify_region({het_mu1(mu3, -0.5, -1), -0.5, mu3}).region == Region::Boundary);
  }
  SUBCASE("on the fold curve") {
    const double mu2 = -0.3, x = std::sqrt(-mu2 / 3);
    CHECK(classify_region({2 * x * x * x, mu2, mu3}).region == Region::Boundary);
  }
  SUBCASE("mirror symmetry swaps R2 and R3") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> m1(-0.05, 0.05), m2(-0.6, -0.02);
    for (int i = 0; i < 300; ++i) {
      const MuParams mu{m1(rng), m2(rng), mu3};
      const auto a = classify_region(mu).region;
      const auto b = classify_region({-mu.mu1, mu.mu2, mu3}).region;
      if (a == Region::R2) {
        CHECK(b == Region::R3);
      } else if (a == Region::R3) {
        CHECK(b == Region::R2);
      } else {
        CHECK(a == b);
      }
    }
  }
  CHECK(to_string(Region::R4) == "R4");
  CHECK(to_string(Region::Boundary) == "Boundary");
}

TEST_CASE("assembled bifurcation set") {
  const auto set = assemble_bifset(0.1);
  CHECK(set.mu3 == 0.1);
  std::vector<std::string> labels;
  for (const auto& c : set.curves) {
    labels.push_back(c.label);
    CHECK(c.mu3 == 0.1);
  }
  for (const char* l : {"saddle_node", "hopf+", "hopf-", "het+", "het-", "hom+", "hom-"}) {
    CHECK(std::count(labels.begin(), labels.end(), l) == 1);
  }
  CHECK(set.points.size() >= 7);

  for (const auto& c : set.curves) {
    if (c.label.rfind("hom", 0) != 0) continue;
    double lo = 0, hi = -1;
    for (const auto& s : c.samples) {
      lo = std::min(lo, s.mu2);
      hi = std::max(hi, s.mu2);
    }
    CHECK(lo == doctest::Approx(-0.1 * kNu2Star).epsilon(1e-12));
    CHECK(hi <= -0.1);
    CHECK(hi == doctest::Approx(-0.1).epsilon(1e-3));
  }

  for (const auto& p : set.points) {
    const bool mirrored = std::any_of(set.points.begin(), set.points.end(), [&](const CodimTwoPoint& q) {
      return q.mu2 == p.mu2 && q.mu1 == -p.mu1;
    });
    CHECK(mirrored);
  }
  CHECK(code_of([] { assemble_bifset(-0.1); }) == ErrorCode::NonPositiveMu3);
}

TEST_CASE("heteroclinic Melnikov keeps one sign on each side of its zero line") {
  for (double nu2 = 1.0; nu2 <= 2.5; nu2 += 0.05) {
    const double zero = -(5 * std::sqrt(2.0) * nu2 - 3 * std::sqrt(2.0) * nu2 * nu2) / 15.0;
    for (int k = 1; k <= 20; ++k) {
      const double d = 0.05 * k;
      CHECK(m_het_closed(zero - d, nu2, 1) < 0.0);
      CHECK(m_het_closed(zero + d, nu2, 1) > 0.0);
    }
  }
}
