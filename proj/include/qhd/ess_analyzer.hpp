#pragma once

// Nash equilibria of a pair of bilinear payoff surfaces on the unit square,
// and ESS classification under the symmetric (single population) and
// asymmetric (role-conditioned, strict NE) rules.
//
// Alice's payoff is linear in her own p for fixed q with slope
// a.slope_p(q) = a.k_pq q + a.k_p, so deviating from p* to p changes her payoff
// by (p - p*) a.slope_p(q*). Bob's is linear in q with slope b.slope_q(p).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qhd/errors.hpp"
#include "qhd/quantum_engine.hpp"

namespace qhd {

enum class CandidateKind { Corner, Edge, Interior };
enum class NeStatus { NotNE, NE, StrictNE, NEContinuum };
enum class EssStatus { ESS, NotESS, Undetermined, NotApplicable };
enum class GameKind { Symmetric, Asymmetric };

inline const char* to_string(CandidateKind k) {
  switch (k) {
    case CandidateKind::Corner: return "corner";
    case CandidateKind::Edge: return "edge";
    case CandidateKind::Interior: return "interior";
  }
  return "?";
}

inline const char* to_string(NeStatus s) {
  switch (s) {
    case NeStatus::NotNE: return "not-NE";
    case NeStatus::NE: return "NE";
    case NeStatus::StrictNE: return "strict-NE";
    case NeStatus::NEContinuum: return "NE-continuum";
  }
  return "?";
}

inline const char* to_string(EssStatus s) {
  switch (s) {
    case EssStatus::ESS: return "ESS";
    case EssStatus::NotESS: return "not-ESS";
    case EssStatus::Undetermined: return "undetermined-at-tolerance";
    case EssStatus::NotApplicable: return "not-applicable";
  }
  return "?";
}

inline const char* to_string(GameKind k) {
  return k == GameKind::Symmetric ? "symmetric" : "asymmetric";
}

inline bool is_nash(NeStatus s) {
  return s == NeStatus::NE || s == NeStatus::StrictNE || s == NeStatus::NEContinuum;
}

/// One inequality that was evaluated, with its margin (positive = holds).
template <typename Scalar>
struct Check {
  std::string description;
  Scalar margin{};
};

template <typename Scalar>
struct Interval {
  Scalar lo{};
  Scalar hi{};
  bool degenerate() const { return lo == hi; }
};

template <typename Scalar>
struct EquilibriumCandidate {
  Scalar p_star{};
  Scalar q_star{};
  CandidateKind kind = CandidateKind::Corner;
  NeStatus ne_status = NeStatus::NotNE;
  EssStatus ess_status = EssStatus::NotApplicable;
  // Extent of an NE-continuum; both collapse to the point otherwise.
  Interval<Scalar> p_range{};
  Interval<Scalar> q_range{};
  std::vector<Check<Scalar>> justification;
};

template <typename Scalar>
struct EquilibriumReport {
  GameKind game_kind = GameKind::Asymmetric;
  Scalar tol{};
  SurfacePair<Scalar> surfaces;
  std::vector<EquilibriumCandidate<Scalar>> candidates;
};

/// 1e-9 times the largest corner magnitude of either surface.
template <typename Scalar>
Scalar default_tolerance(const PayoffSurface<Scalar>& a, const PayoffSurface<Scalar>& b) {
  return Scalar(1e-9) * std::max(a.scale(), b.scale());
}

namespace detail {

template <typename Scalar>
std::string fmt_num(Scalar v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

template <typename Scalar>
EquilibriumCandidate<Scalar> point_candidate(Scalar p, Scalar q, CandidateKind kind) {
  EquilibriumCandidate<Scalar> c;
  c.p_star = p;
  c.q_star = q;
  c.kind = kind;
  c.p_range = {p, p};
  c.q_range = {q, q};
  return c;
}

// Alice's deviation margins at (p*, q*): one entry per pure deviation p in
// {0, 1} other than p*. Margin = $_A(p*, q*) - $_A(p, q*).
template <typename Scalar>
void alice_margins(const PayoffSurface<Scalar>& a, Scalar p_star, Scalar q_star,
                   std::vector<Check<Scalar>>& out) {
  const Scalar slope = a.slope_p(q_star);
  for (Scalar p : {Scalar(0), Scalar(1)}) {
    if (p == p_star) continue;
    out.push_back({"$A(p*,q*) - $A(" + fmt_num(p) + ",q*)", (p_star - p) * slope});
  }
}

template <typename Scalar>
void bob_margins(const PayoffSurface<Scalar>& b, Scalar p_star, Scalar q_star,
                 std::vector<Check<Scalar>>& out) {
  const Scalar slope = b.slope_q(p_star);
  for (Scalar q : {Scalar(0), Scalar(1)}) {
    if (q == q_star) continue;
    out.push_back({"$B(p*,q*) - $B(p*," + fmt_num(q) + ")", (q_star - q) * slope});
  }
}

// Values x in [0, 1] where sign * (k1 x + k0) >= -tol. Linear, so an interval.
template <typename Scalar>
std::optional<Interval<Scalar>> nonnegative_set(Scalar k1, Scalar k0, Scalar sign, Scalar tol) {
  auto ok = [&](Scalar x) { return sign * (k1 * x + k0) >= -tol; };
  const bool at0 = ok(0), at1 = ok(1);
  if (at0 && at1) return Interval<Scalar>{0, 1};
  if (!at0 && !at1) return std::nullopt;
  // Exactly one endpoint satisfies; the boundary is where sign*(k1 x + k0) = -tol.
  const Scalar root = std::clamp((-tol / sign - k0) / k1, Scalar(0), Scalar(1));
  return at0 ? Interval<Scalar>{0, root} : Interval<Scalar>{root, 1};
}

template <typename Scalar>
bool within(Scalar v, Scalar tol) {
  using std::abs;
  return abs(v) <= tol;
}

}  // namespace detail

/// Enumerates Nash equilibria of (surf_a, surf_b) on [0,1]^2.
///
/// Reports all four corners with their NE status, the interior point where
/// each player is indifferent (p* = -b.k_q / b.k_pq, q* = -a.k_p / a.k_pq) when
/// it exists, and NE continua along edges or lines where one player is
/// indifferent. ESS fields are left as not-applicable; see analyze().
template <typename Scalar>
EquilibriumReport<Scalar> find_nash(const PayoffSurface<Scalar>& surf_a,
                                    const PayoffSurface<Scalar>& surf_b, Scalar tol) {
  using detail::within;
  if (!surf_a.all_finite() || !surf_b.all_finite()) {
    throw ValidationError("surface", "coefficients must be finite");
  }
  EquilibriumReport<Scalar> report;
  report.tol = tol;
  report.surfaces = {surf_a, surf_b};
  report.game_kind =
      surfaces_symmetric(surf_a, surf_b, tol) ? GameKind::Symmetric : GameKind::Asymmetric;

  // Corners.
  for (Scalar p : {Scalar(0), Scalar(1)}) {
    for (Scalar q : {Scalar(0), Scalar(1)}) {
      auto c = detail::point_candidate(p, q, CandidateKind::Corner);
      detail::alice_margins(surf_a, p, q, c.justification);
      detail::bob_margins(surf_b, p, q, c.justification);
      bool any_negative = false, all_strict = true;
      for (const auto& check : c.justification) {
        any_negative |= check.margin < -tol;
        all_strict &= check.margin > tol;
      }
      c.ne_status = any_negative ? NeStatus::NotNE : (all_strict ? NeStatus::StrictNE : NeStatus::NE);
      report.candidates.push_back(std::move(c));
    }
  }

  const bool alice_flat = within(surf_a.k_pq, tol) && within(surf_a.k_p, tol);
  const bool bob_flat = within(surf_b.k_pq, tol) && within(surf_b.k_q, tol);

  // Indifference points: q where Alice's slope vanishes, p where Bob's does.
  std::optional<Scalar> q_indiff, p_indiff;
  if (!within(surf_a.k_pq, tol)) {
    const Scalar q = -surf_a.k_p / surf_a.k_pq;
    if (q > 0 && q < 1) q_indiff = q;
  }
  if (!within(surf_b.k_pq, tol)) {
    const Scalar p = -surf_b.k_q / surf_b.k_pq;
    if (p > 0 && p < 1) p_indiff = p;
  }

  if (q_indiff && p_indiff) {
    auto c = detail::point_candidate(*p_indiff, *q_indiff, CandidateKind::Interior);
    c.justification.push_back({"dA/dp at q* (must vanish)", surf_a.slope_p(*q_indiff)});
    c.justification.push_back({"dB/dq at p* (must vanish)", surf_b.slope_q(*p_indiff)});
    c.ne_status = NeStatus::NE;
    report.candidates.push_back(std::move(c));
  }

  if (alice_flat && bob_flat) {
    auto c = detail::point_candidate(Scalar(0.5), Scalar(0.5), CandidateKind::Interior);
    c.p_range = {0, 1};
    c.q_range = {0, 1};
    c.ne_status = NeStatus::NEContinuum;
    c.justification.push_back({"both players indifferent everywhere", Scalar(0)});
    report.candidates.push_back(std::move(c));
    return report;
  }

  // A globally indifferent player facing an opponent with an interior
  // indifference point: the whole line through that point is NE.
  if (alice_flat && p_indiff) {
    auto c = detail::point_candidate(*p_indiff, Scalar(0.5), CandidateKind::Interior);
    c.q_range = {0, 1};
    c.ne_status = NeStatus::NEContinuum;
    c.justification.push_back({"Alice indifferent everywhere; dB/dq at p*", surf_b.slope_q(*p_indiff)});
    report.candidates.push_back(std::move(c));
  }
  if (bob_flat && q_indiff) {
    auto c = detail::point_candidate(Scalar(0.5), *q_indiff, CandidateKind::Interior);
    c.p_range = {0, 1};
    c.ne_status = NeStatus::NEContinuum;
    c.justification.push_back({"Bob indifferent everywhere; dA/dp at q*", surf_a.slope_p(*q_indiff)});
    report.candidates.push_back(std::move(c));
  }

  // Edge continua. On the edge q = qb Alice is indifferent when her slope
  // vanishes there; the edge is NE wherever qb is Bob's best response.
  for (Scalar qb : {Scalar(0), Scalar(1)}) {
    if (!within(surf_a.slope_p(qb), tol)) continue;
    const Scalar sign = qb == 0 ? Scalar(-1) : Scalar(1);
    auto range = detail::nonnegative_set(surf_b.k_pq, surf_b.k_q, sign, tol);
    if (!range || !(range->hi > range->lo)) continue;
    auto c = detail::point_candidate((range->lo + range->hi) / 2, qb, CandidateKind::Edge);
    c.p_range = *range;
    c.ne_status = NeStatus::NEContinuum;
    c.justification.push_back({"dA/dp on edge q = " + detail::fmt_num(qb), surf_a.slope_p(qb)});
    report.candidates.push_back(std::move(c));
  }
  for (Scalar pb : {Scalar(0), Scalar(1)}) {
    if (!within(surf_b.slope_q(pb), tol)) continue;
    const Scalar sign = pb == 0 ? Scalar(-1) : Scalar(1);
    auto range = detail::nonnegative_set(surf_a.k_pq, surf_a.k_p, sign, tol);
    if (!range || !(range->hi > range->lo)) continue;
    auto c = detail::point_candidate(pb, (range->lo + range->hi) / 2, CandidateKind::Edge);
    c.q_range = *range;
    c.ne_status = NeStatus::NEContinuum;
    c.justification.push_back({"dB/dq on edge p = " + detail::fmt_num(pb), surf_b.slope_q(pb)});
    report.candidates.push_back(std::move(c));
  }
  return report;
}

/// Single-population ESS test of a diagonal candidate (s*, s*) against the
/// payoff $(x, y) = surf(x, y) of a symmetric game.
///
/// First condition $(s*,s*) > $(s,s*) is linear in s, so s in {0, 1} suffices.
/// On a tie the second condition $(s*,s) > $(s,s) reduces to
/// (s* - s)(k_pq s + k_p) = -k_pq (s - s*)^2 > 0, i.e. k_pq < 0.
template <typename Scalar>
EquilibriumCandidate<Scalar> classify_symmetric_ess(const PayoffSurface<Scalar>& surf,
                                                    EquilibriumCandidate<Scalar> candidate,
                                                    Scalar tol) {
  using std::abs;
  if (candidate.ne_status == NeStatus::NEContinuum) {
    candidate.ess_status = EssStatus::NotESS;
    candidate.justification.push_back({"NE continuum: neighbours match the payoff", Scalar(0)});
    return candidate;
  }
  if (abs(candidate.p_star - candidate.q_star) > tol) {
    candidate.ess_status = EssStatus::NotApplicable;
    return candidate;
  }
  const Scalar s_star = candidate.p_star;
  const Scalar slope = surf.slope_p(s_star);

  bool any_negative = false, all_strict = true;
  for (Scalar s : {Scalar(0), Scalar(1)}) {
    if (abs(s - s_star) <= tol) continue;
    const Scalar margin = (s_star - s) * slope;
    candidate.justification.push_back({"$(s*,s*) - $(" + detail::fmt_num(s) + ",s*)", margin});
    any_negative |= margin < -tol;
    all_strict &= margin > tol;
  }
  if (any_negative) {
    candidate.ess_status = EssStatus::NotESS;
  } else if (all_strict) {
    candidate.ess_status = EssStatus::ESS;
  } else {
    const Scalar second = -surf.k_pq;
    candidate.justification.push_back({"tie: $(s*,s) - $(s,s) = -k_pq (s - s*)^2, -k_pq", second});
    if (second > tol) {
      candidate.ess_status = EssStatus::ESS;
    } else if (second < -tol) {
      candidate.ess_status = EssStatus::NotESS;
    } else {
      candidate.ess_status = EssStatus::Undetermined;
    }
  }
  return candidate;
}

/// As above, but first checks that surf_b(p, q) = surf_a(q, p).
template <typename Scalar>
EquilibriumCandidate<Scalar> classify_symmetric_ess(const PayoffSurface<Scalar>& surf_a,
                                                    const PayoffSurface<Scalar>& surf_b,
                                                    EquilibriumCandidate<Scalar> candidate,
                                                    Scalar tol) {
  if (!surfaces_symmetric(surf_a, surf_b, tol)) {
    throw PreconditionError("classify_symmetric_ess: surfaces are not symmetric");
  }
  return classify_symmetric_ess(surf_a, std::move(candidate), tol);
}

/// Role-conditioned ESS: the candidate must be a strict NE. Payoffs are linear
/// in each player's own strategy, so a mixture strictly inside (0, 1) can never
/// be a strict best response.
template <typename Scalar>
EquilibriumCandidate<Scalar> classify_asymmetric_ess(const PayoffSurface<Scalar>& surf_a,
                                                     const PayoffSurface<Scalar>& surf_b,
                                                     EquilibriumCandidate<Scalar> candidate,
                                                     Scalar tol) {
  if (candidate.ne_status == NeStatus::NEContinuum) {
    candidate.ess_status = EssStatus::NotESS;
    candidate.justification.push_back({"NE continuum: neighbours match the payoff", Scalar(0)});
    return candidate;
  }
  const Scalar p = candidate.p_star, q = candidate.q_star;
  std::vector<Check<Scalar>> margins;
  detail::alice_margins(surf_a, p, q, margins);
  detail::bob_margins(surf_b, p, q, margins);

  bool any_negative = false, all_strict = true;
  for (const auto& m : margins) {
    any_negative |= m.margin < -tol;
    all_strict &= m.margin > tol;
  }
  const bool interior = (p > 0 && p < 1) || (q > 0 && q < 1);
  if (any_negative) {
    candidate.ess_status = EssStatus::NotESS;
  } else if (interior) {
    candidate.ess_status = EssStatus::NotESS;
    margins.push_back({"interior mixture: own payoff linear, no strict maximum", Scalar(0)});
  } else if (all_strict) {
    candidate.ess_status = EssStatus::ESS;
  } else {
    candidate.ess_status = EssStatus::Undetermined;
  }
  // Corner candidates from find_nash already carry these margins.
  if (candidate.kind != CandidateKind::Corner || candidate.justification.empty()) {
    candidate.justification.insert(candidate.justification.end(), margins.begin(), margins.end());
  }
  return candidate;
}

/// find_nash followed by the ESS rule matching the game kind.
template <typename Scalar>
EquilibriumReport<Scalar> analyze(const PayoffSurface<Scalar>& surf_a,
                                  const PayoffSurface<Scalar>& surf_b, Scalar tol) {
  auto report = find_nash(surf_a, surf_b, tol);
  for (auto& c : report.candidates) {
    if (!is_nash(c.ne_status)) {
      c.ess_status = EssStatus::NotESS;
      continue;
    }
    if (report.game_kind == GameKind::Symmetric) {
      c = classify_symmetric_ess(surf_a, std::move(c), tol);
    } else {
      c = classify_asymmetric_ess(surf_a, surf_b, std::move(c), tol);
    }
  }
  return report;
}

template <typename Scalar>
EquilibriumReport<Scalar> analyze(const SurfacePair<Scalar>& surfaces) {
  return analyze(surfaces.alice, surfaces.bob, default_tolerance(surfaces.alice, surfaces.bob));
}

/// Largest mutant share below which the incumbent strictly outperforms the
/// mutant in a symmetric game. With f(eps) = (1 - eps) d1 + eps d2,
///   d1 = $(s*,s*) - $(m,s*),  d2 = $(s*,m) - $(m,m),
/// returns nullopt when d1 < -tol, 1 when f > 0 on (0, 1], and the root
/// d1 / (d1 - d2) otherwise.
template <typename Scalar>
std::optional<Scalar> invasion_barrier(const PayoffSurface<Scalar>& surf, Scalar incumbent,
                                       Scalar mutant, Scalar tol) {
  if (!(incumbent >= 0 && incumbent <= 1 && mutant >= 0 && mutant <= 1)) {
    throw DomainError("invasion_barrier: strategies must lie in [0, 1]");
  }
  if (incumbent == mutant) throw DomainError("invasion_barrier: mutant equals incumbent");

  Scalar d1 = surf(incumbent, incumbent) - surf(mutant, incumbent);
  const Scalar d2 = surf(incumbent, mutant) - surf(mutant, mutant);
  if (d1 < -tol) return std::nullopt;
  if (d1 <= tol) d1 = 0;
  if (d1 == 0) return d2 > tol ? Scalar(1) : Scalar(0);
  if (d2 >= 0) return Scalar(1);
  return d1 / (d1 - d2);
}

}  // namespace qhd
