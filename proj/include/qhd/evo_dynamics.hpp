#pragma once

// Discrete-time replicator dynamics for an incumbent/mutant pair playing a
// bilinear payoff surface. Strategies are identity probabilities in [0, 1];
// a population mixture enters the payoff linearly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qhd/errors.hpp"
#include "qhd/quantum_engine.hpp"

namespace qhd {

/// Payoff of `strategy` against the average opponent in a population where a
/// share `mutant_share` plays `mutant` and the rest plays `incumbent`.
template <typename Scalar>
Scalar population_fitness(const PayoffSurface<Scalar>& surface, Scalar strategy,
                          Scalar mutant_share, Scalar incumbent, Scalar mutant) {
  const Scalar opponent = (1 - mutant_share) * incumbent + mutant_share * mutant;
  return surface(strategy, opponent);
}

enum class InvasionVerdict { MutantExtinct, MutantFixates, Coexistence, MaxGenerationsReached };

inline const char* to_string(InvasionVerdict v) {
  switch (v) {
    case InvasionVerdict::MutantExtinct: return "mutant-extinct";
    case InvasionVerdict::MutantFixates: return "mutant-fixates";
    case InvasionVerdict::Coexistence: return "coexistence";
    case InvasionVerdict::MaxGenerationsReached: return "max-generations-reached";
  }
  return "?";
}

struct DynamicsSettings {
  double epsilon = 0.01;
  std::size_t generations = 100000;
  double step_size = 0.1;
  double extinction_threshold = 1e-6;
};

inline void validate(const DynamicsSettings& s) {
  if (!(s.epsilon > 0 && s.epsilon < 1)) throw ValidationError("epsilon", "must lie in (0, 1)");
  if (s.generations == 0) throw ValidationError("generations", "must be positive");
  if (!(s.step_size > 0 && s.step_size <= 1)) {
    throw ValidationError("step_size", "must lie in (0, 1]");
  }
  if (!(s.extinction_threshold > 0 && s.extinction_threshold < 0.5)) {
    throw ValidationError("extinction_threshold", "must lie in (0, 0.5)");
  }
}

template <typename Scalar>
struct InvasionScenario {
  PayoffSurface<Scalar> surface;
  Scalar incumbent{};
  Scalar mutant{};
  DynamicsSettings settings;
};

template <typename Scalar>
void validate(const InvasionScenario<Scalar>& s) {
  validate(s.settings);
  if (!(s.incumbent >= 0 && s.incumbent <= 1)) throw ValidationError("incumbent", "must lie in [0, 1]");
  if (!(s.mutant >= 0 && s.mutant <= 1)) throw ValidationError("mutant", "must lie in [0, 1]");
  if (s.incumbent == s.mutant) throw ValidationError("mutant", "must differ from the incumbent");
}

template <typename Scalar>
struct InvasionTrajectory {
  std::vector<Scalar> shares;  // mutant share per generation, shares[0] = epsilon
  InvasionVerdict verdict = InvasionVerdict::MaxGenerationsReached;
  Scalar extinction_threshold{};
};

namespace detail {

template <typename Scalar>
Scalar dynamics_scale(const PayoffSurface<Scalar>& s) {
  return std::max(Scalar(1), s.scale());
}

template <typename Scalar>
Scalar replicator_step(Scalar x, Scalar advantage, Scalar step, Scalar scale) {
  return std::clamp(x + step * x * (1 - x) * advantage / scale, Scalar(0), Scalar(1));
}

}  // namespace detail

/// Iterates x <- clamp(x + h x (1 - x) (W_mut - W_inc) / scale, 0, 1) from
/// x = epsilon, with scale = max(1, max |corner value|). Stops on extinction
/// (x < threshold), fixation (x > 1 - threshold), a vanishing fitness gap
/// (coexistence) or when the generation budget runs out.
template <typename Scalar>
InvasionTrajectory<Scalar> simulate_invasion(const InvasionScenario<Scalar>& scenario) {
  using std::abs;
  using std::isfinite;
  validate(scenario);
  const auto& cfg = scenario.settings;
  const Scalar scale = detail::dynamics_scale(scenario.surface);
  const Scalar threshold = Scalar(cfg.extinction_threshold);
  const Scalar step = Scalar(cfg.step_size);

  InvasionTrajectory<Scalar> out;
  out.extinction_threshold = threshold;
  out.shares.reserve(std::min<std::size_t>(cfg.generations + 1, 1 << 16));
  Scalar x = Scalar(cfg.epsilon);
  out.shares.push_back(x);

  for (std::size_t gen = 0;; ++gen) {
    if (x < threshold) {
      out.verdict = InvasionVerdict::MutantExtinct;
      return out;
    }
    if (x > 1 - threshold) {
      out.verdict = InvasionVerdict::MutantFixates;
      return out;
    }
    if (gen == cfg.generations) break;
    const Scalar w_inc = population_fitness(scenario.surface, scenario.incumbent, x,
                                            scenario.incumbent, scenario.mutant);
    const Scalar w_mut = population_fitness(scenario.surface, scenario.mutant, x,
                                            scenario.incumbent, scenario.mutant);
    if (!isfinite(w_inc) || !isfinite(w_mut)) {
      throw NumericError(gen, "simulate_invasion: non-finite fitness at generation " +
                                  std::to_string(gen));
    }
    if (abs(w_mut - w_inc) < Scalar(1e-12) * scale) {
      out.verdict = InvasionVerdict::Coexistence;
      return out;
    }
    x = detail::replicator_step(x, w_mut - w_inc, step, scale);
    out.shares.push_back(x);
  }
  out.verdict = InvasionVerdict::MaxGenerationsReached;
  return out;
}

/// Two populations, one per role. Row players earn surf_a against the column
/// population's average q; column players earn surf_b against the row
/// population's average p.
template <typename Scalar>
struct TwoPopulationScenario {
  SurfacePair<Scalar> surfaces;
  Scalar incumbent_row{};
  Scalar incumbent_col{};
  Scalar mutant_row{};
  Scalar mutant_col{};
  DynamicsSettings settings;
};

template <typename Scalar>
struct TwoPopulationTrajectory {
  std::vector<Scalar> row_shares;
  std::vector<Scalar> col_shares;
  InvasionVerdict verdict = InvasionVerdict::MaxGenerationsReached;
  Scalar extinction_threshold{};
};

/// Both shares start at epsilon, except that a role whose mutant equals its
/// incumbent carries no mutants (share 0). Extinction requires both shares
/// below threshold; fixation is declared when either exceeds 1 - threshold.
template <typename Scalar>
TwoPopulationTrajectory<Scalar> simulate_two_population_invasion(
    const TwoPopulationScenario<Scalar>& scenario) {
  using std::abs;
  using std::isfinite;
  validate(scenario.settings);
  for (Scalar v : {scenario.incumbent_row, scenario.incumbent_col, scenario.mutant_row,
                   scenario.mutant_col}) {
    if (!(v >= 0 && v <= 1)) throw ValidationError("strategy", "must lie in [0, 1]");
  }
  const bool row_active = scenario.mutant_row != scenario.incumbent_row;
  const bool col_active = scenario.mutant_col != scenario.incumbent_col;
  if (!row_active && !col_active) {
    throw ValidationError("mutant", "must differ from the incumbent in at least one role");
  }

  const auto& cfg = scenario.settings;
  const auto& a = scenario.surfaces.alice;
  const auto& b = scenario.surfaces.bob;
  const Scalar scale = std::max(detail::dynamics_scale(a), detail::dynamics_scale(b));
  const Scalar threshold = Scalar(cfg.extinction_threshold);
  const Scalar step = Scalar(cfg.step_size);

  TwoPopulationTrajectory<Scalar> out;
  out.extinction_threshold = threshold;
  Scalar x = row_active ? Scalar(cfg.epsilon) : Scalar(0);
  Scalar y = col_active ? Scalar(cfg.epsilon) : Scalar(0);
  out.row_shares.push_back(x);
  out.col_shares.push_back(y);

  for (std::size_t gen = 0;; ++gen) {
    if (x < threshold && y < threshold) {
      out.verdict = InvasionVerdict::MutantExtinct;
      return out;
    }
    if (x > 1 - threshold || y > 1 - threshold) {
      out.verdict = InvasionVerdict::MutantFixates;
      return out;
    }
    if (gen == cfg.generations) break;
    const Scalar col_mix = (1 - y) * scenario.incumbent_col + y * scenario.mutant_col;
    const Scalar row_mix = (1 - x) * scenario.incumbent_row + x * scenario.mutant_row;
    const Scalar row_gap = a(scenario.mutant_row, col_mix) - a(scenario.incumbent_row, col_mix);
    const Scalar col_gap = b(row_mix, scenario.mutant_col) - b(row_mix, scenario.incumbent_col);
    if (!isfinite(row_gap) || !isfinite(col_gap)) {
      throw NumericError(gen, "simulate_two_population_invasion: non-finite fitness at generation " +
                                  std::to_string(gen));
    }
    const Scalar eps_gap = Scalar(1e-12) * scale;
    if ((!row_active || abs(row_gap) < eps_gap) && (!col_active || abs(col_gap) < eps_gap)) {
      out.verdict = InvasionVerdict::Coexistence;
      return out;
    }
    if (row_active) x = detail::replicator_step(x, row_gap, step, scale);
    if (col_active) y = detail::replicator_step(y, col_gap, step, scale);
    out.row_shares.push_back(x);
    out.col_shares.push_back(y);
  }
  out.verdict = InvasionVerdict::MaxGenerationsReached;
  return out;
}

}  // namespace qhd
