#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "btu/equilibria.hpp"
#include "btu/errors.hpp"
#include "btu/memristor.hpp"
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

const MemristorParams kSphere{1.0, 4.8, 5.0, 80.0, std::nullopt};
const MemristorParams kLeaf{1.0, 1.0, 5.0, 100.0, std::nullopt};

// Derivative of the lifted point along the Lienard flow, by the chain rule.
SpaceState lifted_velocity(const GeneralFamily& g, double h, PlanarState l) {
  const double Xd = l.y - g.lienard_f(l.x);
  const double Yd = -g.lienard_g(l.x) + h;
  const double eps = 1e-6 * std::max(1.0, std::abs(l.x));
  const double dF = (g.lienard_f(l.x + eps) - g.lienard_f(l.x - eps)) / (2 * eps);
  return {Yd - dF * Xd, ((g.a22 * g.a22 + g.a12 * g.a21) * Xd + g.a22 * Yd) / g.a12, Xd};
}

}  // namespace

TEST_CASE("alpha normalization") {
  const CircuitParams raw{1.0, 4.8, 5.0, 50.0, 2.0};
  const auto p = normalize_alpha(raw);
  CHECK(p.xi == 100.0);
  CHECK(p.beta == 5.0);
  CHECK(p.b == 9.6);
  REQUIRE(p.alpha);
  CHECK(*p.alpha == 2.0);

  const auto id = normalize_alpha({0.3, 1.2, 0.7, 9.0, 1.0});
  CHECK(id.a == 0.3);
  CHECK(id.b == 1.2);
  CHECK(id.beta == 0.7);
  CHECK(id.xi == 9.0);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const CircuitParams r{u(rng), u(rng), pos(rng), pos(rng), pos(rng)};
    const auto back = denormalize_alpha(normalize_alpha(r));
    CHECK(back.a == doctest::Approx(r.a).epsilon(1e-15));
    CHECK(back.b == doctest::Approx(r.b).epsilon(1e-15));
    CHECK(back.beta == r.beta);
    CHECK(back.xi == doctest::Approx(r.xi).epsilon(1e-15));
    CHECK(back.alpha == r.alpha);
    const SpaceState s{u(rng), u(rng), u(rng)};
    const auto t = denormalize_state(normalize_state(s, r.alpha), r.alpha);
    for (int k = 0; k < 3; ++k) CHECK(t[k] == doctest::Approx(s[k]).epsilon(1e-15));
  }
  CHECK(code_of([] { normalize_alpha({1, 1, 1, 1, 0.0}); }) == ErrorCode::NonPositiveAlpha);
  CHECK(code_of([] { normalize_state({0, 0, 0}, -1.0); }) == ErrorCode::NonPositiveAlpha);
}

TEST_CASE("circuit and normalized runs agree") {
  const CircuitParams raw{0.5, 1.5, 0.2, 3.0, 2.0};
  const auto p = normalize_alpha(raw);
  const SpaceState s0{0.1, 0.05, -0.2};
  IntegratorConfig cfg;
  cfg.record = false;
  const auto a = integrate<3>(circuit_field(raw), 0.0, s0, 10.0, cfg).final_state;
  const auto b = integrate<3>(memristor_field(p), 0.0, normalize_state(s0, 2.0), 10.0, cfg).final_state;
  const auto back = denormalize_state(b, 2.0);
  for (int k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(a[k]).epsilon(1e-7));
}

TEST_CASE("first integral") {
  CHECK(first_integral(kLeaf, {0, 0, 0}) == 0.0);
  CHECK(first_integral(kLeaf, {0, 0.3, 0}) == doctest::Approx(0.3).epsilon(1e-15));
  // -beta x + y - beta z^3 - a beta z^2 + (xi - b beta) z
  CHECK(first_integral(kLeaf, {1, 2, 0.5}) ==
        doctest::Approx(-5 + 2 - 5 * 0.125 - 5 * 0.25 + 95 * 0.5).epsilon(1e-15));

  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> ua(-1.0, 1.0), ub(1.0, 3.0), ubeta(0.05, 0.5), uxi(0.5, 5.0),
      us(-0.3, 0.3);
  IntegratorConfig cfg;
  for (int i = 0; i < 10; ++i) {
    const MemristorParams p{ua(rng), ub(rng), ubeta(rng), uxi(rng), std::nullopt};
    const SpaceState s0{us(rng), us(rng), us(rng)};
    const auto run = integrate<3>(memristor_field(p), 0.0, s0, 50.0, cfg);
    REQUIRE(run.final_time == 50.0);
    const double h0 = first_integral(p, s0);
    double drift = 0;
    for (const auto& s : run.trajectory.states) drift = std::max(drift, std::abs(first_integral(p, s) - h0));
    CHECK(drift <= 1e-7);
  }
}

TEST_CASE("Lienard reduction") {
  for (double a : {1.0, 2.0, -0.5}) {
    MemristorParams p = kLeaf;
    p.a = a;
    const double h = 0.3, beta = p.beta, b = p.b, xi = p.xi;
    const auto f = lienard_reduce(to_family(p), h);
    for (double X : {-1.0, 0.2, 0.7}) {
      for (double Y : {-0.5, 0.0, 1.5}) {
        const auto v = f(0.0, {X, Y});
        CHECK(v[0] == doctest::Approx(Y - X * X * X - a * X * X + (beta - b) * X).epsilon(1e-14));
        CHECK(v[1] == doctest::Approx(beta * X * X * X + a * beta * X * X + (b * beta - xi) * X + h).epsilon(1e-14));
      }
    }
  }
  // h only shifts Y'
  const auto f0 = lienard_reduce(to_family(kLeaf), 0.0), f1 = lienard_reduce(to_family(kLeaf), 0.7);
  const auto v0 = f0(0.0, {0.4, -0.2}), v1 = f1(0.0, {0.4, -0.2});
  CHECK(v1[0] == v0[0]);
  CHECK(v1[1] - v0[1] == doctest::Approx(0.7).epsilon(1e-14));

  GeneralFamily bad = to_family(kLeaf);
  bad.a12 = 0.0;
  CHECK(code_of([&] { lienard_reduce(bad, 0.0); }) == ErrorCode::ZeroA12);
  CHECK(code_of([&] { lift_point(bad, 0.0, {0, 0}); }) == ErrorCode::ZeroA12);
}

TEST_CASE("lifted Lienard orbits solve the 3D system") {
  const GeneralFamily g = to_family(kLeaf);
  const double h = 0.3;
  IntegratorConfig cfg;
  const auto planar = integrate<2>(lienard_reduce(g, h), 0.0, {0.05, 0.1}, 20.0, cfg);
  const auto lifted = lift(g, h, planar.trajectory);
  REQUIRE(lifted.size() == planar.trajectory.size());
  const auto F = memristor_field(kLeaf);
  double residual = 0, leaf = 0;
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    const auto l = to_planar(planar.trajectory.states[i]);
    const auto want = lifted_velocity(g, h, l);
    const auto got = F(0.0, lifted.states[i]);
    for (int k = 0; k < 3; ++k) residual = std::max(residual, std::abs(got[k] - want[k]) / (1 + std::abs(want[k])));
    leaf = std::max(leaf, std::abs(first_integral(kLeaf, lifted.states[i]) - h));
  }
  CHECK(residual <= 1e-7);
  CHECK(leaf <= 1e-12);

  // twin run: direct 3D integration from the lifted start
  const auto direct = integrate<3>(F, 0.0, lifted.states.front(), 20.0, cfg).final_state;
  const auto via = lifted.states.back();
  for (int k = 0; k < 3; ++k) CHECK(std::abs(direct[k] - via[k]) <= 1e-6 * (1 + std::abs(via[k])));
}

TEST_CASE("lift is exact on the leaf for general families") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    GeneralFamily g{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    if (std::abs(g.a12) < 0.1) continue;
    const double h = u(rng);
    const auto s = lift_point(g, h, {u(rng), u(rng)});
    CHECK(std::abs(first_integral(g, s) - h) <= 1e-12 * (1 + std::abs(h) + std::abs(s[0]) + std::abs(s[1])));
  }
}

TEST_CASE("canonical parameters") {
  const auto mu = to_canonical(kSphere, 0.0);
  CHECK(mu.mu3 == doctest::Approx(1.6 / 15).epsilon(1e-14));
  CHECK(mu.mu3 == doctest::Approx(0.10667).epsilon(1e-4));
  CHECK(mu.mu2 == doctest::Approx(-173.0 / 75).epsilon(1e-14));
  CHECK(mu.mu1 == doctest::Approx(514.0 / (27 * std::pow(5.0, 2.5))).epsilon(1e-14));
  CHECK(mu.mu1 == doctest::Approx(0.34055).epsilon(1e-4));

  SUBCASE("general map agrees with the memristor closed form") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.1, 5.0);
    for (int i = 0; i < 100; ++i) {
      const MemristorParams p{u(rng), u(rng), pos(rng), pos(rng), std::nullopt};
      const double h = u(rng);
      const auto cf = to_canonical(to_family(p), h);
      const auto m = to_canonical(p, h);
      CHECK(cf.branch == CanonicalBranch::A);
      CHECK(cf.mu.mu1 == doctest::Approx(m.mu1).epsilon(1e-10));
      CHECK(cf.mu.mu2 == doctest::Approx(m.mu2).epsilon(1e-10));
      CHECK(cf.mu.mu3 == doctest::Approx(m.mu3).epsilon(1e-10));
      CHECK(cf.cubic == 1.0);
      CHECK(cf.cross == -3.0);
    }
  }
  SUBCASE("branch B") {
    const GeneralFamily g{-1.0, 2.0, -0.7, 0.0, 1.0, 0.4, 0.3};
    const auto cf = to_canonical(g, 0.1);
    CHECK(cf.branch == CanonicalBranch::B);
    CHECK(cf.mu.mu2 == g.a12 * g.a21);
  }
  SUBCASE("unavailable branch") {
    const GeneralFamily g{1.0, 1.0, -1.0, 1.0, 1.0, 0.0, 1.0};
    CHECK(code_of([&] { to_canonical(g, 0.0); }) == ErrorCode::BranchUnavailable);
  }
  SUBCASE("variable change maps the Lienard field onto the canonical one") {
    for (const GeneralFamily& g : {GeneralFamily{-1.0, 1.0, -80.0, 5.0, 1.0, 1.0, 4.8},
                                   GeneralFamily{-0.5, 1.5, -3.0, 2.0, 2.0, -0.3, 0.7},
                                   GeneralFamily{-1.0, 2.0, -0.7, 0.0, 1.5, 0.4, 0.3}}) {
      const double h = 0.2;
      const auto cf = to_canonical(g, h);
      const auto L = lienard_reduce(g, h);
      for (double X : {-0.8, 0.1, 0.9}) {
        for (double Y : {-0.4, 0.3}) {
          const auto v = L(0.0, {X, Y});
          const double eps = 1e-6;
          const double dF = (g.lienard_f(X + eps) - g.lienard_f(X - eps)) / (2 * eps);
          const double Xdd = v[1] - dF * v[0];
          const auto c = lienard_to_canonical(g, cf, {X, Y});
          const double k = cf.time_scale, s = cf.x_scale;
          const double want = Xdd / (k * k * s);
          const double got = cf.mu.mu1 + cf.mu.mu2 * c.x + cf.cubic * c.x * c.x * c.x + cf.mu.mu3 * c.y +
                             cf.cross * c.x * c.x * c.y;
          CHECK(got == doctest::Approx(want).epsilon(1e-7));
          CHECK(c.y == doctest::Approx(v[0] / (k * s)).epsilon(1e-14));
          const auto back = canonical_to_lienard(g, cf, c);
          CHECK(back.x == doctest::Approx(X).epsilon(1e-14));
          CHECK(back.y == doctest::Approx(Y).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("Lienard equilibria match the canonical ones") {
  const GeneralFamily g = to_family(kSphere);
  const auto bounds = sphere_bounds(kSphere);
  for (double h : {bounds.h_lo * 0.9, bounds.h_lo * 0.3, 0.0, bounds.h_hi * 0.5, bounds.h_hi * 1.5, 200.0}) {
    CAPTURE(h);
    const auto cf = to_canonical(g, h);
    // Lienard equilibria: g(X) = h, Y = F(X); roots of the shifted cubic by bisection
    const double A3 = g.a11 * g.a22 * g.c, A2 = g.a11 * g.a22 * g.a;
    const double A1 = g.a11 * g.a22 * g.b - g.a12 * g.a21, A0 = -h;
    const double shift = A2 / (3 * A3);
    const double p = (A1 - A2 * A2 / (3 * A3)) / A3;
    const double q = (2 * A2 * A2 * A2 / (27 * A3 * A3) - A2 * A1 / (3 * A3) + A0) / A3;
    const auto roots = oracle::cubic_roots(p, q);
    const auto eqs = solve_equilibria(cf.mu);
    REQUIRE(roots.size() == eqs.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const double X = roots[i] - shift;
      const double dF = -g.a11 * g.w(X) - g.a22;
      const double dg = g.a11 * g.a22 * g.w(X) - g.a12 * g.a21;
      const double trace = -dF, det = dg;
      const auto c = lienard_to_canonical(g, cf, {X, g.lienard_f(X)});
      CHECK(c.x == doctest::Approx(eqs[i].x).epsilon(1e-8));
      CHECK((det < 0) == (eqs[i].kind == EquilibriumKind::Saddle));
      if (det > 0) CHECK((trace > 0) == (eqs[i].trace > 0));
    }
  }
}

TEST_CASE("sphere bounds") {
  const auto r = sphere_bounds(kSphere);
  const double a = 1, b = 4.8, beta = 5, xi = 80;
  const double even = (4 * a * a * beta + 3 * beta * beta - 12 * b * beta + 9 * xi) * std::sqrt(a * a - 3 * b + 3 * beta);
  const double odd = 9 * a * xi + 2 * a * a * a * beta - 9 * a * b * beta;
  CHECK(r.A == doctest::Approx(even + odd).epsilon(1e-14));
  CHECK(r.B == doctest::Approx(even - odd).epsilon(1e-14));
  CHECK(std::abs(r.A - 1180.1) <= 1.0);
  CHECK(std::abs(r.B - 152.2) <= 1.0);
  CHECK(r.h_lo == -r.A / 27);
  CHECK(r.h_hi == r.B / 27);
  CHECK(r.hopf_h_lo > r.h_lo);
  CHECK(r.hopf_h_hi < r.h_hi);
  CHECK(r.all_hold());

  const auto sym = sphere_report({0.0, 1.0, 0.2, 3.0, std::nullopt});
  CHECK(sym.A == sym.B);

  const auto bad = sphere_report({3.0, 1.0, 5.0, 80.0, std::nullopt});
  CHECK_FALSE(bad.all_hold());
  CHECK_FALSE(bad.hypotheses.front().holds);
  try {
    sphere_bounds({3.0, 1.0, 5.0, 80.0, std::nullopt});
    FAIL("expected HypothesesViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesesViolated);
    CHECK(std::string(e.what()).find("a^2 - 3b < 0") != std::string::npos);
  }
}

TEST_CASE("sphere slices") {
  const auto s = sphere_slices(kSphere, 9);
  CHECK(s.skipped.empty());
  REQUIRE(s.orbits.size() == 9);
  REQUIRE(s.h_values.size() == 9);
  CHECK(std::is_sorted(s.h_values.begin(), s.h_values.end()));
  for (std::size_t i = 0; i < s.orbits.size(); ++i) {
    const auto& o = s.orbits[i];
    const auto& a = o.states.front();
    const auto& b = o.states.back();
    CHECK(std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])}) <= 1e-7);
    double leaf = 0;
    for (const auto& st : o.states) leaf = std::max(leaf, std::abs(first_integral(kSphere, st) - s.h_values[i]));
    CHECK(leaf <= 1e-7);
  }
  // amplitudes rise then fall: the sphere closes at both poles
  const auto peak = std::max_element(s.amplitudes.begin(), s.amplitudes.end()) - s.amplitudes.begin();
  for (long i = 0; i < peak; ++i) CHECK(s.amplitudes[i] < s.amplitudes[i + 1]);
  for (std::size_t i = peak; i + 1 < s.amplitudes.size(); ++i) CHECK(s.amplitudes[i] > s.amplitudes[i + 1]);
  CHECK(peak > 0);
  CHECK(peak < 8);

  const auto mid = leaf_cycle(kSphere, 0.5 * (s.h_values.front() + s.h_values.back()));
  CHECK(mid.size() > 10);
  const auto r = sphere_bounds(kSphere);
  CHECK(code_of([&] { leaf_cycle(kSphere, r.h_hi + 0.1 * (r.h_hi - r.h_lo)); }) == ErrorCode::PreconditionViolated);
  CHECK(code_of([&] { leaf_cycle(kSphere, r.h_lo - 0.1 * (r.h_hi - r.h_lo)); }) == ErrorCode::PreconditionViolated);
  CHECK(code_of([] { sphere_slices({3.0, 1.0, 5.0, 80.0, std::nullopt}, 9); }) == ErrorCode::HypothesesViolated);
}
