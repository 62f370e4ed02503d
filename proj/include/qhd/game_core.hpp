#pragma once

// Classical Hawk-Dove game: payoff matrix construction, pure and mixed ESS
// tests, and population fitness for a Hawk fraction h.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qhd/errors.hpp"

namespace qhd {

enum class Strategy : int { Hawk = 0, Dove = 1 };

inline const char* to_string(Strategy s) { return s == Strategy::Hawk ? "Hawk" : "Dove"; }

template <typename Scalar>
struct HawkDoveParams {
  Scalar resource_value{};
  Scalar injury_cost{};
  Scalar display_cost{};
  Scalar losing_cost{0};
};

template <typename Scalar>
struct PayoffPair {
  Scalar row{};
  Scalar col{};
  bool operator==(const PayoffPair&) const = default;
};

/// Two-strategy bimatrix game. Entry (i, j) of `row` and `col` is the payoff to
/// the row and column player when row plays strategy i and column plays j, with
/// strategies indexed Hawk = 0, Dove = 1.
template <typename Scalar>
struct BimatrixGame2x2 {
  using Matrix = Eigen::Matrix<Scalar, 2, 2>;

  Matrix row = Matrix::Zero();
  Matrix col = Matrix::Zero();

  BimatrixGame2x2() = default;
  BimatrixGame2x2(const Matrix& row_payoffs, const Matrix& col_payoffs)
      : row(row_payoffs), col(col_payoffs) {}

  PayoffPair<Scalar> operator()(Strategy r, Strategy c) const {
    const int i = static_cast<int>(r), j = static_cast<int>(c);
    return {row(i, j), col(i, j)};
  }

  /// Row player's payoff; for a symmetric game this is the classical $(x, y).
  Scalar payoff(Strategy mine, Strategy theirs) const {
    return row(static_cast<int>(mine), static_cast<int>(theirs));
  }

  bool all_finite() const { return row.allFinite() && col.allFinite(); }

  Scalar scale() const {
    using std::abs;
    return std::max(row.cwiseAbs().maxCoeff(), col.cwiseAbs().maxCoeff());
  }

  bool operator==(const BimatrixGame2x2& o) const { return row == o.row && col == o.col; }
};

namespace detail {

template <typename Scalar>
void require_finite(Scalar v, const char* field) {
  using std::isfinite;
  if (!isfinite(v)) throw ValidationError(field, "must be finite");
}

template <typename Scalar>
void require_finite(const BimatrixGame2x2<Scalar>& game) {
  if (!game.all_finite()) throw ValidationError("game", "all payoff entries must be finite");
}

template <typename Scalar>
Scalar tie_tolerance(const BimatrixGame2x2<Scalar>& game) {
  return Scalar(1e-9) * game.scale();
}

}  // namespace detail

/// Throws ValidationError naming the first offending field.
template <typename Scalar>
void validate(const HawkDoveParams<Scalar>& params, bool strict_signs) {
  detail::require_finite(params.resource_value, "resource_value");
  detail::require_finite(params.injury_cost, "injury_cost");
  detail::require_finite(params.display_cost, "display_cost");
  detail::require_finite(params.losing_cost, "losing_cost");
  if (!strict_signs) return;
  if (!(params.resource_value > 0)) throw ValidationError("resource_value", "must be positive");
  if (!(params.injury_cost < 0)) throw ValidationError("injury_cost", "must be negative");
  if (!(params.display_cost < 0)) throw ValidationError("display_cost", "must be negative");
}

/// Hawk-Dove payoff matrix. The loser of a Hawk/Dove contest receives
/// `losing_cost`; with the default of zero this is the textbook matrix
///
///            H                       D
///   H  (v/2 + i/2, v/2 + i/2)     (v, L)
///   D  (L, v)                     (v/2 + d, v/2 + d)
template <typename Scalar>
BimatrixGame2x2<Scalar> build_hawk_dove(const HawkDoveParams<Scalar>& params,
                                        bool strict_signs = false) {
  validate(params, strict_signs);
  const Scalar v = params.resource_value;
  const Scalar hh = v / 2 + params.injury_cost / 2;
  const Scalar dd = v / 2 + params.display_cost;
  const Scalar loss = params.losing_cost;

  typename BimatrixGame2x2<Scalar>::Matrix row, col;
  row << hh, v, loss, dd;
  col << hh, loss, v, dd;
  return {row, col};
}

enum class PureESSStatus { Strict, BySecondCondition, NotESS };

inline const char* to_string(PureESSStatus s) {
  switch (s) {
    case PureESSStatus::Strict: return "ESS-strict";
    case PureESSStatus::BySecondCondition: return "ESS-by-second-condition";
    case PureESSStatus::NotESS: return "not-ESS";
  }
  return "?";
}

template <typename Scalar>
struct MixedESS {
  Scalar hawk_fraction{};
  bool stable = false;
};

template <typename Scalar>
struct ClassicalESSReport {
  PureESSStatus hawk_pure = PureESSStatus::NotESS;
  PureESSStatus dove_pure = PureESSStatus::NotESS;
  std::optional<MixedESS<Scalar>> mixed;
  std::vector<std::string> reasons;
};

template <typename Scalar>
struct FitnessPair {
  Scalar fitness_hawk{};
  Scalar fitness_dove{};
};

namespace detail {

// Pure strategy s is an ESS if $(s,s) > $(o,s), or $(s,s) = $(o,s) and $(s,o) > $(o,o).
template <typename Scalar>
PureESSStatus pure_ess_status(const BimatrixGame2x2<Scalar>& game, Strategy s, Strategy o,
                              Scalar tol, std::vector<std::string>& reasons) {
  const Scalar first = game.payoff(s, s) - game.payoff(o, s);
  const Scalar second = game.payoff(s, o) - game.payoff(o, o);
  std::ostringstream msg;
  msg << to_string(s) << ": $(" << to_string(s)[0] << ',' << to_string(s)[0] << ") - $("
      << to_string(o)[0] << ',' << to_string(s)[0] << ") = " << first;
  PureESSStatus status = PureESSStatus::NotESS;
  if (first > tol) {
    status = PureESSStatus::Strict;
    msg << " > 0";
  } else if (first >= -tol) {
    msg << " = 0; $(" << to_string(s)[0] << ',' << to_string(o)[0] << ") - $(" << to_string(o)[0]
        << ',' << to_string(o)[0] << ") = " << second;
    if (second > tol) {
      status = PureESSStatus::BySecondCondition;
      msg << " > 0";
    } else {
      msg << " <= 0";
    }
  } else {
    msg << " < 0";
  }
  msg << " => " << to_string(status);
  reasons.push_back(msg.str());
  return status;
}

}  // namespace detail

/// Pure-strategy ESS verdicts from the row payoffs of a symmetric game. Ties are
/// decided with absolute tolerance 1e-9 times the largest payoff magnitude.
template <typename Scalar>
ClassicalESSReport<Scalar> classical_pure_ess(const BimatrixGame2x2<Scalar>& game) {
  detail::require_finite(game);
  const Scalar tol = detail::tie_tolerance(game);
  ClassicalESSReport<Scalar> report;
  report.hawk_pure =
      detail::pure_ess_status(game, Strategy::Hawk, Strategy::Dove, tol, report.reasons);
  report.dove_pure =
      detail::pure_ess_status(game, Strategy::Dove, Strategy::Hawk, tol, report.reasons);
  return report;
}

/// Interior Hawk fraction h at which W(H) = W(D), if one exists in (0, 1).
/// For the Hawk-Dove matrix with L = 0 this is h = (2d - v) / (2d + i).
/// `stable` is set when the point also satisfies the second-order ESS
/// condition, i.e. $(H,H) - $(D,H) - $(H,D) + $(D,D) < 0.
template <typename Scalar>
std::optional<MixedESS<Scalar>> classical_mixed_ess(const BimatrixGame2x2<Scalar>& game) {
  using std::abs;
  detail::require_finite(game);
  const Scalar tol = detail::tie_tolerance(game);
  const Scalar hh = game.payoff(Strategy::Hawk, Strategy::Hawk);
  const Scalar hd = game.payoff(Strategy::Hawk, Strategy::Dove);
  const Scalar dh = game.payoff(Strategy::Dove, Strategy::Hawk);
  const Scalar dd = game.payoff(Strategy::Dove, Strategy::Dove);

  const Scalar curvature = hh - dh - hd + dd;
  if (abs(curvature) <= tol) {
    throw DegenerateError("mixed ESS: fitness difference is constant in h (2d + i = 0)");
  }
  const Scalar h = (dd - hd) / curvature;
  if (!(h > 0 && h < 1)) return std::nullopt;
  return MixedESS<Scalar>{h, curvature < -tol};
}

/// Pure plus mixed analysis. A degenerate mixed denominator is recorded as a
/// reason instead of propagating.
template <typename Scalar>
ClassicalESSReport<Scalar> classical_ess(const BimatrixGame2x2<Scalar>& game) {
  auto report = classical_pure_ess(game);
  try {
    report.mixed = classical_mixed_ess(game);
    if (report.mixed) {
      std::ostringstream msg;
      msg << "mixed: W(H) = W(D) at h = " << report.mixed->hawk_fraction << " ("
          << (report.mixed->stable ? "stable" : "not stable") << ")";
      report.reasons.push_back(msg.str());
    } else {
      report.reasons.emplace_back("mixed: no indifference point inside (0, 1)");
    }
  } catch (const DegenerateError& e) {
    report.reasons.emplace_back(e.what());
  }
  return report;
}

/// W(H) and W(D) in a population with Hawk fraction h.
template <typename Scalar>
FitnessPair<Scalar> fitness(const BimatrixGame2x2<Scalar>& game, Scalar h) {
  if (!(h >= 0 && h <= 1)) throw DomainError("fitness: h must lie in [0, 1]");
  const Scalar w_hawk = game.payoff(Strategy::Hawk, Strategy::Hawk) * h +
                        game.payoff(Strategy::Hawk, Strategy::Dove) * (1 - h);
  const Scalar w_dove = game.payoff(Strategy::Dove, Strategy::Hawk) * h +
                        game.payoff(Strategy::Dove, Strategy::Dove) * (1 - h);
  return {w_hawk, w_dove};
}

}  // namespace qhd
