#include "qhd/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "qhd/ess_analyzer.hpp"
#include "qhd/game_core.hpp"
#include "qhd/quantum_engine.hpp"
#include "qhd/random.hpp"
#include "qhd/report.hpp"

namespace qhd {
namespace {

InitialState<double> random_state(UnitRandom& rng) {
  StateAmplitudes<double> amps{{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                               {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                               {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                               {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
  const double norm = std::sqrt(std::norm(amps.hh) + std::norm(amps.dd) + std::norm(amps.hd) +
                                std::norm(amps.dh));
  amps.hh /= norm;
  amps.dd /= norm;
  amps.hd /= norm;
  amps.dh /= norm;
  return make_initial_state(amps, NormalizationPolicy::Renormalize);
}

BimatrixGame2x2<double> random_game(UnitRandom& rng) {
  Eigen::Matrix2d row, col;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      row(i, j) = rng.uniform(-100, 100);
      col(i, j) = rng.uniform(-100, 100);
    }
  }
  return {row, col};
}

InitialState<double> state_from_moduli(double a2, double b2, double c2, double d2) {
  return make_initial_state(StateAmplitudes<double>{std::sqrt(a2), std::sqrt(b2), std::sqrt(c2), std::sqrt(d2)});
}

const EquilibriumCandidate<double>* find_candidate(const EquilibriumReport<double>& r, double p, double q,
                                                   double tol) {
  for (const auto& c : r.candidates) {
    if (c.ne_status == NeStatus::NEContinuum) continue;
    if (std::abs(c.p_star - p) <= tol && std::abs(c.q_star - q) <= tol) return &c;
  }
  return nullptr;
}

struct Golden {
  std::string name;
  std::function<bool(std::string&)> run;  // sets a detail message on failure
};

}  // namespace

VerifyOutcome run_verification(const VerifyOptions& options) {
  VerifyOutcome out;
  auto record = [&](bool ok, const std::string& line) {
    ++out.checks;
    if (!ok) ++out.failures;
    out.lines.push_back((ok ? "PASS " : "FAIL ") + line);
  };

  // Oracle: explicit density-matrix trace versus closed-form surfaces.
  {
    UnitRandom rng(options.seed);
    std::size_t bad = 0;
    double worst = 0;
    for (std::size_t t = 0; t < options.trials; ++t) {
      const auto state = random_state(rng);
      const auto game = random_game(rng);
      const TacticProfile<double> tactics{rng.uniform(), rng.uniform()};
      const auto trace = expected_payoffs_trace(state, game, tactics);
      const auto surfaces = payoff_surface(state, game);
      const double scale = std::max(1.0, game.scale());
      const double err = std::max(std::abs(trace.alice - surfaces.alice(tactics.p, tactics.q)),
                                  std::abs(trace.bob - surfaces.bob(tactics.p, tactics.q))) /
                         scale;
      worst = std::max(worst, err);
      if (!(err < options.tol)) ++bad;
    }
    std::ostringstream line;
    line << "trace-vs-closed-form: " << options.trials << " draws, seed " << options.seed
         << ", worst relative error " << format_short(worst) << " (tol " << format_short(options.tol) << ")";
    if (bad) line << ", " << bad << " failures";
    record(bad == 0, line.str());
  }

  // Golden cases. Payoff values are exact fractions; compare at 1e-12 * 50.
  const double gtol = 1e-12 * 50;
  auto near = [&](double a, double b) { return std::abs(a - b) <= gtol; };
  const auto hd_game = build_hawk_dove(HawkDoveParams<double>{50, -100, -10, 0}, true);

  std::vector<Golden> goldens;
  goldens.push_back({"classical matrix (50, -100, -10)", [&](std::string& why) {
                       Eigen::Matrix2d row, col;
                       row << -25, 50, 0, 15;
                       col << -25, 0, 50, 15;
                       why = "matrix differs";
                       return hd_game.row == row && hd_game.col == col;
                     }});
  goldens.push_back({"classical pure: no pure ESS; mixed ESS h = 7/12", [&](std::string& why) {
                       const auto pure = classical_pure_ess(hd_game);
                       const auto mixed = classical_mixed_ess(hd_game);
                       why = "unexpected verdict";
                       return pure.hawk_pure == PureESSStatus::NotESS && pure.dove_pure == PureESSStatus::NotESS &&
                              mixed && mixed->stable && std::abs(mixed->hawk_fraction - 7.0 / 12) <= 1e-12;
                     }});
  goldens.push_back({"symmetric case 1: (0,0) ESS, $(p,0) = 95/8 - 195/16 p", [&](std::string& why) {
                       const auto s = payoff_surface(state_from_moduli(1.0 / 16, 1.0 / 4, 11.0 / 32, 11.0 / 32), hd_game);
                       const auto r = analyze(s);
                       const auto* c = find_candidate(r, 0, 0, 1e-12);
                       why = "surface or verdict mismatch";
                       return r.game_kind == GameKind::Symmetric && near(s.alice(0, 0), 95.0 / 8) &&
                              near(s.alice.slope_p(0), -195.0 / 16) && c && c->ess_status == EssStatus::ESS;
                     }});
  goldens.push_back({"symmetric case 2: (1,1) ESS, $(p,1) = 35/16 + 295/16 p", [&](std::string& why) {
                       const auto s = payoff_surface(state_from_moduli(1.0 / 16, 1.0 / 8, 13.0 / 32, 13.0 / 32), hd_game);
                       const auto r = analyze(s);
                       const auto* c = find_candidate(r, 1, 1, 1e-12);
                       why = "surface or verdict mismatch";
                       return near(s.alice(1, 1), 165.0 / 8) && near(s.alice(0, 1), 35.0 / 16) &&
                              near(s.alice.slope_p(1), 295.0 / 16) && c && c->ess_status == EssStatus::ESS;
                     }});
  goldens.push_back({"symmetric case 3: mixed ESS (7/12, 7/12), payoff 8.75", [&](std::string& why) {
                       const auto s = payoff_surface(state_from_moduli(1.0 / 2, 1.0 / 6, 1.0 / 6, 1.0 / 6), hd_game);
                       const auto r = analyze(s);
                       const auto* c = find_candidate(r, 7.0 / 12, 7.0 / 12, 1e-12);
                       why = "interior NE or verdict mismatch";
                       return c && c->kind == CandidateKind::Interior && c->ess_status == EssStatus::ESS &&
                              near(s.alice(7.0 / 12, 7.0 / 12), 8.75);
                     }});
  goldens.push_back({"asymmetric case 1: (0,0) strict NE and ESS", [&](std::string& why) {
                       const auto s = payoff_surface(state_from_moduli(1.0 / 16, 1.0 / 4, 9.0 / 16, 1.0 / 8), hd_game);
                       const auto r = analyze(s);
                       const auto* c = find_candidate(r, 0, 0, 1e-12);
                       why = "surface or verdict mismatch";
                       return r.game_kind == GameKind::Asymmetric && near(s.alice(0, 0), 15.0 / 16) &&
                              near(s.alice.slope_p(0), -10) && near(s.bob(0, 0), 365.0 / 16) &&
                              near(s.bob.slope_q(0), -230.0 / 16) && c && c->ne_status == NeStatus::StrictNE &&
                              c->ess_status == EssStatus::ESS;
                     }});
  goldens.push_back({"asymmetric case 2: (1,1) ESS", [&](std::string& why) {
                       const auto s = payoff_surface(state_from_moduli(1.0 / 16, 1.0 / 8, 9.0 / 16, 1.0 / 4), hd_game);
                       const auto r = analyze(s);
                       const auto* c = find_candidate(r, 1, 1, 1e-12);
                       why = "surface or verdict mismatch";
                       return near(s.alice(1, 1), 455.0 / 16) && near(s.bob(1, 1), 205.0 / 16) && c &&
                              c->ess_status == EssStatus::ESS;
                     }});
  goldens.push_back({"asymmetric case 3: interior NE is not an ESS", [&](std::string& why) {
                       const auto s = payoff_surface(state_from_moduli(1.0 / 16, 1.0 / 8, 9.0 / 16, 1.0 / 4), hd_game);
                       const auto r = analyze(s);
                       // p* = (-7a-5b+7c+5d) / (12(-a-b+c+d)), q* with c and d weights swapped.
                       const double a = 1.0 / 16, b = 1.0 / 8, c2 = 9.0 / 16, d2 = 1.0 / 4;
                       const double den = 12 * (-a - b + c2 + d2);
                       const double p = (-7 * a - 5 * b + 7 * c2 + 5 * d2) / den;
                       const double q = (-7 * a - 5 * b + 5 * c2 + 7 * d2) / den;
                       const auto* c = find_candidate(r, p, q, 1e-12);
                       why = "interior candidate missing or classified ESS";
                       return c && is_nash(c->ne_status) && c->ess_status == EssStatus::NotESS;
                     }});

  for (const auto& g : goldens) {
    std::string why;
    bool ok = false;
    try {
      ok = g.run(why);
    } catch (const std::exception& e) {
      why = e.what();
    }
    record(ok, "golden " + g.name + (ok ? "" : ": " + why));
  }
  return out;
}

}  // namespace qhd
