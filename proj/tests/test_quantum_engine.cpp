#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qhd/game_core.hpp"
#include "qhd/quantum_engine.hpp"
#include "qhd/random.hpp"

using namespace qhd;
using C = std::complex<double>;

namespace {

const auto kGame = build_hawk_dove(HawkDoveParams<double>{50, -100, -10}, true);

InitialState<double> from_moduli(double a2, double b2, double c2, double d2) {
  return make_initial_state(StateAmplitudes<double>{std::sqrt(a2), std::sqrt(b2), std::sqrt(c2), std::sqrt(d2)});
}

InitialState<double> random_state(UnitRandom& rng) {
  StateAmplitudes<double> a{{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                            {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                            {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                            {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
  const double n = std::sqrt(std::norm(a.hh) + std::norm(a.dd) + std::norm(a.hd) + std::norm(a.dh));
  return make_initial_state(StateAmplitudes<double>{a.hh / n, a.dd / n, a.hd / n, a.dh / n},
                            NormalizationPolicy::Renormalize);
}

BimatrixGame2x2<double> random_game(UnitRandom& rng) {
  BimatrixGame2x2<double> g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      g.row(i, j) = rng.uniform(-100, 100);
      g.col(i, j) = rng.uniform(-100, 100);
    }
  return g;
}

void check_surface(const PayoffSurface<double>& s, double kpq, double kp, double kq, double k0) {
  const double tol = 1e-12 * 50;
  CHECK(std::abs(s.k_pq - kpq) <= tol);
  CHECK(std::abs(s.k_p - kp) <= tol);
  CHECK(std::abs(s.k_q - kq) <= tol);
  CHECK(std::abs(s.k_0 - k0) <= tol);
}

}  // namespace

TEST_CASE("make_initial_state") {
  const auto hh = make_initial_state(StateAmplitudes<double>{1, 0, 0, 0});
  CHECK(hh.vector()(kHH) == C(1));
  CHECK(hh.vector()(kHD) == C(0));

  const double r = 1 / std::sqrt(2.0);
  const auto bell = make_initial_state(StateAmplitudes<double>{r, r, 0, 0});
  CHECK(bell.probabilities()(kHH) == doctest::Approx(0.5));
  CHECK(bell.probabilities()(kDD) == doctest::Approx(0.5));

  try {
    make_initial_state(StateAmplitudes<double>{2, 0, 0, 0});
    FAIL("expected NormalizationError");
  } catch (const NormalizationError& e) {
    CHECK(e.norm_squared() == 4);
    CHECK(std::string(e.what()).find("4") != std::string::npos);
  }

  CHECK_THROWS_AS(make_initial_state(StateAmplitudes<double>{0, 0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(make_initial_state(StateAmplitudes<double>{C(std::nan(""), 0), 0, 0, 0}), ValidationError);

  // 1 + 1e-7: rejected by default, absorbed on request.
  const double a = std::sqrt(1 + 1e-7);
  CHECK_THROWS_AS(make_initial_state(StateAmplitudes<double>{a, 0, 0, 0}), NormalizationError);
  const auto fixed = make_initial_state(StateAmplitudes<double>{a, 0, 0, 0}, NormalizationPolicy::Renormalize);
  CHECK(std::abs(fixed.vector().squaredNorm() - 1) < 1e-15);
  CHECK_THROWS_AS(make_initial_state(StateAmplitudes<double>{std::sqrt(1 + 1e-5), 0, 0, 0},
                                     NormalizationPolicy::Renormalize),
                  NormalizationError);
  CHECK_NOTHROW(make_initial_state(StateAmplitudes<double>{std::sqrt(1 + 1e-10), 0, 0, 0}));
}

TEST_CASE("final_density_matrix on |HH>") {
  const auto hh = make_initial_state(StateAmplitudes<double>{1, 0, 0, 0});

  const auto rho1 = final_density_matrix(hh, TacticProfile<double>{1, 1});
  CHECK(rho1(kHH, kHH) == C(1));
  CHECK(rho1.cwiseAbs().sum() == doctest::Approx(1));

  const auto rho0 = final_density_matrix(hh, TacticProfile<double>{0, 0});
  CHECK(rho0(kDD, kDD) == C(1));
  CHECK(rho0.cwiseAbs().sum() == doctest::Approx(1));

  const auto rho_half = final_density_matrix(hh, TacticProfile<double>{0.5, 0.5});
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(rho_half(i, j) - C(i == j ? 0.25 : 0)) < 1e-15);
    }
  }

  CHECK_THROWS_AS(final_density_matrix(hh, TacticProfile<double>{1.5, 0}), DomainError);
  CHECK_THROWS_AS(final_density_matrix(hh, TacticProfile<double>{0, -0.1}), DomainError);
}

TEST_CASE("payoff_operators") {
  const auto ops = payoff_operators(kGame);
  // Basis order |HH>, |HD>, |DH>, |DD>.
  CHECK(ops.diag_a(0) == -25);
  CHECK(ops.diag_a(1) == 50);
  CHECK(ops.diag_a(2) == 0);
  CHECK(ops.diag_a(3) == 15);
  CHECK(ops.diag_b(0) == -25);
  CHECK(ops.diag_b(1) == 0);
  CHECK(ops.diag_b(2) == 50);
  CHECK(ops.diag_b(3) == 15);

  CHECK(payoff_operators(BimatrixGame2x2<double>{}).diag_a.isZero(0));

  BimatrixGame2x2<double> g;
  g.row << 1, 3, 5, 7;
  g.col << 2, 4, 6, 8;
  const auto seq = payoff_operators(g);
  CHECK(seq.diag_a == Eigen::Vector4d(1, 3, 5, 7));
  CHECK(seq.diag_b == Eigen::Vector4d(2, 4, 6, 8));
}

TEST_CASE("expected_payoffs_trace") {
  const auto hh = make_initial_state(StateAmplitudes<double>{1, 0, 0, 0});
  auto t = expected_payoffs_trace(hh, kGame, TacticProfile<double>{1, 1});
  CHECK(t.alice == doctest::Approx(-25));
  CHECK(t.bob == doctest::Approx(-25));

  // Bob flips: rho_f = |HD><HD|.
  t = expected_payoffs_trace(hh, kGame, TacticProfile<double>{1, 0});
  CHECK(t.alice == doctest::Approx(50));
  CHECK(t.bob == doctest::Approx(0));

  const auto hd = make_initial_state(StateAmplitudes<double>{0, 0, 1, 0});
  t = expected_payoffs_trace(hd, kGame, TacticProfile<double>{1, 1});
  CHECK(t.alice == doctest::Approx(50));
  CHECK(t.bob == doctest::Approx(0));

  // a^2 = 1/2, b^2 = c^2 = d^2 = 1/6 at p = q = 7/12.
  const auto s3 = from_moduli(0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6);
  t = expected_payoffs_trace(s3, kGame, TacticProfile<double>{7.0 / 12, 7.0 / 12});
  CHECK(t.alice == doctest::Approx(8.75).epsilon(1e-13));
  CHECK(t.bob == doctest::Approx(8.75).epsilon(1e-13));
}

TEST_CASE("payoff_surface golden coefficients") {
  // |HH>: classical mixed-strategy payoff with Hawk probabilities p and q.
  // A(p,q) = -25pq + 50p(1-q) + 15(1-p)(1-q) = -60pq + 35p - 15q + 15.
  auto s = payoff_surface(make_initial_state(StateAmplitudes<double>{1, 0, 0, 0}), kGame);
  check_surface(s.alice, -60, 35, -15, 15);
  check_surface(s.bob, -60, -15, 35, 15);

  s = payoff_surface(from_moduli(0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6), BimatrixGame2x2<double>{});
  CHECK(s.alice == PayoffSurface<double>{});
  CHECK(s.bob == PayoffSurface<double>{});

  // Remaining values are hand-evaluated fractions; k_pq = (a2 + b2 - c2 - d2) * -60.
  // a2 = 1/16, b2 = 1/4, c2 = d2 = 11/32.
  s = payoff_surface(from_moduli(1.0 / 16, 1.0 / 4, 11.0 / 32, 11.0 / 32), kGame);
  check_surface(s.alice, 22.5, -195.0 / 16, -2.8125, 95.0 / 8);
  check_surface(s.bob, 22.5, -2.8125, -195.0 / 16, 95.0 / 8);

  // a2 = 1/16, b2 = 1/8, c2 = d2 = 13/32.
  s = payoff_surface(from_moduli(1.0 / 16, 1.0 / 8, 13.0 / 32, 13.0 / 32), kGame);
  check_surface(s.alice, 37.5, -19.0625, -15.9375, 18.125);
  CHECK(s.alice(1, 1) == doctest::Approx(165.0 / 8));
  CHECK(s.alice(0, 1) == doctest::Approx(35.0 / 16));

  // a2 = 1/2, b2 = c2 = d2 = 1/6.
  s = payoff_surface(from_moduli(0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6), kGame);
  check_surface(s.alice, -20, 35.0 / 3, -5, 35.0 / 3);
  CHECK(s.alice.slope_p(7.0 / 12) == doctest::Approx(0).scale(1));

  // a2 = 1/16, b2 = 1/4, c2 = 9/16, d2 = 1/8.
  s = payoff_surface(from_moduli(1.0 / 16, 1.0 / 4, 9.0 / 16, 1.0 / 8), kGame);
  check_surface(s.alice, 22.5, -10, 16.875, 15.0 / 16);
  check_surface(s.bob, 22.5, -22.5, -230.0 / 16, 365.0 / 16);

  // a2 = 1/16, b2 = 1/8, c2 = 9/16, d2 = 1/4.
  s = payoff_surface(from_moduli(1.0 / 16, 1.0 / 8, 9.0 / 16, 1.0 / 4), kGame);
  check_surface(s.alice, 37.5, -17.5, -1.875, 10.3125);
  check_surface(s.bob, 37.5, -30, -20.625, 25.9375);
  CHECK(s.alice(1, 1) == doctest::Approx(455.0 / 16));
  CHECK(s.bob(1, 1) == doctest::Approx(205.0 / 16));
}

TEST_CASE("is_symmetric") {
  CHECK(is_symmetric(from_moduli(0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6), 1e-12));
  CHECK_FALSE(is_symmetric(from_moduli(1.0 / 16, 1.0 / 4, 9.0 / 16, 1.0 / 8), 1e-12));
  CHECK(is_symmetric(from_moduli(1, 0, 0, 0), 1e-12));

  // Equal moduli, different phases.
  const double r = 0.5;
  const auto phased = make_initial_state(StateAmplitudes<double>{r, r, C(r, 0), C(0, r)});
  CHECK(is_symmetric(phased, 1e-12));
  CHECK_FALSE(is_symmetric(phased, 1e-12, SymmetryCriterion::Amplitudes));
}

TEST_CASE("surface transposition") {
  const PayoffSurface<double> s{1, 2, 3, 4};
  CHECK(s.transposed() == PayoffSurface<double>{1, 3, 2, 4});
  CHECK(s.transposed()(0.2, 0.7) == doctest::Approx(s(0.7, 0.2)));
  CHECK(surfaces_symmetric(s, s.transposed(), 0.0));
  CHECK_FALSE(surfaces_symmetric(s, s, 1e-9));
}

TEST_CASE("random draws: trace oracle, density contract, invariances") {
  UnitRandom rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    CAPTURE(trial);
    const auto state = random_state(rng);
    const auto game = random_game(rng);
    const TacticProfile<double> t{rng.uniform(), rng.uniform()};
    const double scale = std::max(1.0, game.scale());

    CHECK(std::abs(state.vector().squaredNorm() - 1) <= 1e-9);
    const auto trace = expected_payoffs_trace(state, game, t);
    const auto surf = payoff_surface(state, game);

    const auto corners = surf.alice.corners();
    const auto [lo, hi] = std::minmax_element(corners.begin(), corners.end());
    CHECK(surf.alice(t.p, t.q) >= *lo - 1e-12 * scale);
    CHECK(surf.alice(t.p, t.q) <= *hi + 1e-12 * scale);
    CHECK(std::abs(trace.alice - surf.alice(t.p, t.q)) / scale < 1e-12);
    CHECK(std::abs(trace.bob - surf.bob(t.p, t.q)) / scale < 1e-12);

    const auto diag = diagnose(final_density_matrix(state, t));
    CHECK(diag.hermitian_error < 1e-12);
    CHECK(diag.trace_error < 1e-12);
    CHECK(diag.min_eigenvalue > -1e-12);

    // A global phase leaves the surfaces unchanged.
    const C phase = std::polar(1.0, rng.uniform(0, 6.283185307179586));
    const auto rotated = make_initial_state(StateAmplitudes<double>{phase * state.amp_hh(), phase * state.amp_dd(),
                                                                    phase * state.amp_hd(), phase * state.amp_dh()});
    const auto surf_rot = payoff_surface(rotated, game);
    CHECK(std::abs(surf_rot.alice(t.p, t.q) - surf.alice(t.p, t.q)) / scale < 1e-12);

    // Relabelling the players: swap c and d, transpose the game, swap p and q.
    BimatrixGame2x2<double> swapped{game.col.transpose(), game.row.transpose()};
    const auto surf_swap = payoff_surface(state.swapped_roles(), swapped);
    CHECK(std::abs(surf_swap.alice(t.q, t.p) - surf.bob(t.p, t.q)) / scale < 1e-12);
    CHECK(std::abs(surf_swap.bob(t.q, t.p) - surf.alice(t.p, t.q)) / scale < 1e-12);
  }
}

TEST_CASE("random symmetric states on Hawk-Dove games reduce to a single surface") {
  UnitRandom rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    CAPTURE(trial);
    const double a2 = rng.uniform(), b2 = rng.uniform(), c2 = rng.uniform();
    const double total = a2 + b2 + 2 * c2;
    const auto state = from_moduli(a2 / total, b2 / total, c2 / total, c2 / total);
    const auto game = build_hawk_dove(
        HawkDoveParams<double>{rng.uniform(0.1, 100), -rng.uniform(0.1, 200), -rng.uniform(0.1, 50)}, true);
    const auto s = payoff_surface(state, game);
    CHECK(surfaces_symmetric(s.alice, s.bob, 1e-12 * std::max(1.0, game.scale())));
  }
}

TEST_CASE("classical embedding: |HH> reproduces mixed-strategy payoffs") {
  UnitRandom rng(13);
  const auto hh = make_initial_state(StateAmplitudes<double>{1, 0, 0, 0});
  for (int trial = 0; trial < 1000; ++trial) {
    const auto game = random_game(rng);
    const double p = rng.uniform(), q = rng.uniform();
    const auto s = payoff_surface(hh, game);
    const Eigen::Vector2d x(p, 1 - p), y(q, 1 - q);
    const double scale = std::max(1.0, game.scale());
    CHECK(std::abs(s.alice(p, q) - x.dot(game.row * y)) / scale < 1e-12);
    CHECK(std::abs(s.bob(p, q) - x.dot(game.col * y)) / scale < 1e-12);
  }
}

TEST_CASE("long double surfaces agree with double") {
  const auto g = build_hawk_dove(HawkDoveParams<long double>{50, -100, -10}, true);
  const auto st = make_initial_state(
      StateAmplitudes<long double>{std::sqrt(0.5L), std::sqrt(1.0L / 6), std::sqrt(1.0L / 6), std::sqrt(1.0L / 6)});
  const auto s = payoff_surface(st, g);
  CHECK(std::abs(s.alice.k_p - 35.0L / 3) < 1e-15L);
  CHECK(std::abs(s.alice(7.0L / 12, 7.0L / 12) - 8.75L) < 1e-15L);
}
