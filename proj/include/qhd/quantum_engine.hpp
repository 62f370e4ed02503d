#pragma once

// Two-qubit quantization of a 2x2 game: each player applies the identity with
// probability p (Alice) or q (Bob) and the flip C otherwise to a shared pure
// state. Payoffs are expectations of diagonal payoff operators.
//
// Basis order everywhere: |HH>, |HD>, |DH>, |DD>, first slot Alice. Index of a
// basis state is 2 * alice + bob with H = 0, D = 1, so a flip of Alice's qubit
// is index ^ 2 and a flip of Bob's is index ^ 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "qhd/errors.hpp"
#include "qhd/game_core.hpp"

namespace qhd {

enum BasisIndex : int { kHH = 0, kHD = 1, kDH = 2, kDD = 3 };

template <typename Scalar>
using Complex = std::complex<Scalar>;
template <typename Scalar>
using StateVector = Eigen::Matrix<Complex<Scalar>, 4, 1>;
template <typename Scalar>
using DensityMatrix4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;
template <typename Scalar>
using Operator2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar>
using Diagonal4 = Eigen::Matrix<Scalar, 4, 1>;

/// Amplitudes by basis label. Declaration order follows the usual a, b, c, d
/// naming of the shared state a|HH> + b|DD> + c|HD> + d|DH>.
template <typename Scalar>
struct StateAmplitudes {
  Complex<Scalar> hh{};
  Complex<Scalar> dd{};
  Complex<Scalar> hd{};
  Complex<Scalar> dh{};
};

enum class NormalizationPolicy { Reject, Renormalize };

inline constexpr double kNormSilentTolerance = 1e-9;
inline constexpr double kNormRenormalizeTolerance = 1e-6;

template <typename Scalar>
class InitialState;

template <typename Scalar>
InitialState<Scalar> make_initial_state(const StateAmplitudes<Scalar>& amps,
                                        NormalizationPolicy policy = NormalizationPolicy::Reject);

/// Normalized pure two-qubit state. Construct through make_initial_state.
template <typename Scalar>
class InitialState {
 public:
  const StateVector<Scalar>& vector() const { return psi_; }

  Complex<Scalar> amp_hh() const { return psi_(kHH); }
  Complex<Scalar> amp_dd() const { return psi_(kDD); }
  Complex<Scalar> amp_hd() const { return psi_(kHD); }
  Complex<Scalar> amp_dh() const { return psi_(kDH); }

  /// |amplitude|^2 in basis order.
  Diagonal4<Scalar> probabilities() const { return psi_.cwiseAbs2(); }

  DensityMatrix4<Scalar> density() const { return psi_ * psi_.adjoint(); }

  /// Same state with the |HD> and |DH> amplitudes exchanged (players relabelled).
  InitialState swapped_roles() const {
    InitialState out = *this;
    std::swap(out.psi_(kHD), out.psi_(kDH));
    return out;
  }

 private:
  template <typename S>
  friend InitialState<S> make_initial_state(const StateAmplitudes<S>&, NormalizationPolicy);

  StateVector<Scalar> psi_ = StateVector<Scalar>::Zero();
};

/// Builds a normalized state. Deviations of the squared norm from one up to
/// 1e-9 are absorbed silently; up to 1e-6 only under Renormalize; anything
/// larger raises NormalizationError reporting the squared norm.
template <typename Scalar>
InitialState<Scalar> make_initial_state(const StateAmplitudes<Scalar>& amps,
                                        NormalizationPolicy policy) {
  using std::abs;
  using std::isfinite;
  using std::sqrt;
  InitialState<Scalar> state;
  state.psi_ << amps.hh, amps.hd, amps.dh, amps.dd;
  if (!state.psi_.allFinite()) throw ValidationError("state", "amplitudes must be finite");

  const Scalar norm_sq = state.psi_.squaredNorm();
  if (norm_sq == Scalar(0)) throw ValidationError("state", "all amplitudes are zero");

  const Scalar deviation = abs(norm_sq - Scalar(1));
  const bool silent = deviation <= Scalar(kNormSilentTolerance);
  const bool fixable =
      policy == NormalizationPolicy::Renormalize && deviation <= Scalar(kNormRenormalizeTolerance);
  if (!silent && !fixable) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state: squared moduli sum to " << norm_sq << ", expected 1";
    throw NormalizationError(static_cast<double>(norm_sq), msg.str());
  }
  state.psi_ /= sqrt(norm_sq);
  return state;
}

/// Probabilities with which Alice (p) and Bob (q) apply the identity.
template <typename Scalar>
struct TacticProfile {
  Scalar p{1};
  Scalar q{1};
};

template <typename Scalar>
void validate(const TacticProfile<Scalar>& t) {
  if (!(t.p >= 0 && t.p <= 1)) throw DomainError("tactics: p must lie in [0, 1]");
  if (!(t.q >= 0 && t.q <= 1)) throw DomainError("tactics: q must lie in [0, 1]");
}

template <typename Scalar>
Operator2<Scalar> identity_operator() {
  return Operator2<Scalar>::Identity();
}

/// C|H> = |D>, C|D> = |H>.
template <typename Scalar>
Operator2<Scalar> flip_operator() {
  Operator2<Scalar> c;
  c << Complex<Scalar>(0), Complex<Scalar>(1), Complex<Scalar>(1), Complex<Scalar>(0);
  return c;
}

template <typename Scalar>
DensityMatrix4<Scalar> kron(const Operator2<Scalar>& alice, const Operator2<Scalar>& bob) {
  DensityMatrix4<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = alice(i, j) * bob;
  return out;
}

/// rho_f = sum over (Alice op, Bob op) in {I, C}^2 of
///   weight * (U_A (x) U_B) rho_in (U_A (x) U_B)^dagger
/// with weights pq, p(1-q), (1-p)q, (1-p)(1-q).
template <typename Scalar>
DensityMatrix4<Scalar> final_density_matrix(const InitialState<Scalar>& state,
                                            const TacticProfile<Scalar>& tactics) {
  validate(tactics);
  const DensityMatrix4<Scalar> rho = state.density();
  const Operator2<Scalar> id = identity_operator<Scalar>();
  const Operator2<Scalar> flip = flip_operator<Scalar>();
  const Scalar p = tactics.p, q = tactics.q;

  const std::array<std::pair<Scalar, DensityMatrix4<Scalar>>, 4> terms{{
      {p * q, kron(id, id)},
      {p * (1 - q), kron(id, flip)},
      {(1 - p) * q, kron(flip, id)},
      {(1 - p) * (1 - q), kron(flip, flip)},
  }};
  DensityMatrix4<Scalar> out = DensityMatrix4<Scalar>::Zero();
  for (const auto& [weight, u] : terms) out += weight * (u * rho * u.adjoint());
  return out;
}

template <typename Scalar>
struct DensityDiagnostics {
  Scalar hermitian_error{};  // max |rho - rho^dagger|
  Scalar trace_error{};      // |Tr rho - 1|
  Scalar min_eigenvalue{};
};

template <typename Scalar>
DensityDiagnostics<Scalar> diagnose(const DensityMatrix4<Scalar>& rho) {
  using std::abs;
  DensityDiagnostics<Scalar> d;
  d.hermitian_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = abs(rho.trace() - Complex<Scalar>(1));
  Eigen::SelfAdjointEigenSolver<DensityMatrix4<Scalar>> solver(rho, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

/// Diagonals of the payoff operators P_A and P_B in basis order.
template <typename Scalar>
struct PayoffOperatorPair {
  Diagonal4<Scalar> diag_a = Diagonal4<Scalar>::Zero();
  Diagonal4<Scalar> diag_b = Diagonal4<Scalar>::Zero();
};

template <typename Scalar>
PayoffOperatorPair<Scalar> payoff_operators(const BimatrixGame2x2<Scalar>& game) {
  detail::require_finite(game);
  PayoffOperatorPair<Scalar> ops;
  ops.diag_a << game.row(0, 0), game.row(0, 1), game.row(1, 0), game.row(1, 1);
  ops.diag_b << game.col(0, 0), game.col(0, 1), game.col(1, 0), game.col(1, 1);
  return ops;
}

template <typename Scalar>
struct PlayerPayoffs {
  Scalar alice{};
  Scalar bob{};
};

/// (Tr(P_A rho_f), Tr(P_B rho_f)) through explicit matrix construction.
template <typename Scalar>
PlayerPayoffs<Scalar> expected_payoffs_trace(const InitialState<Scalar>& state,
                                             const BimatrixGame2x2<Scalar>& game,
                                             const TacticProfile<Scalar>& tactics) {
  const auto ops = payoff_operators(game);
  const DensityMatrix4<Scalar> rho = final_density_matrix(state, tactics);
  const DensityMatrix4<Scalar> pa = ops.diag_a.template cast<Complex<Scalar>>().asDiagonal();
  const DensityMatrix4<Scalar> pb = ops.diag_b.template cast<Complex<Scalar>>().asDiagonal();
  return {(pa * rho).trace().real(), (pb * rho).trace().real()};
}

/// k_pq p q + k_p p + k_q q + k_0, with p Alice's and q Bob's identity
/// probability regardless of which player's payoff the surface describes.
template <typename Scalar>
struct PayoffSurface {
  Scalar k_pq{};
  Scalar k_p{};
  Scalar k_q{};
  Scalar k_0{};

  Scalar operator()(Scalar p, Scalar q) const { return k_pq * p * q + k_p * p + k_q * q + k_0; }

  /// Partial derivative in p, as a function of q.
  Scalar slope_p(Scalar q) const { return k_pq * q + k_p; }
  /// Partial derivative in q, as a function of p.
  Scalar slope_q(Scalar p) const { return k_pq * p + k_q; }

  /// Values at (0,0), (0,1), (1,0), (1,1).
  std::array<Scalar, 4> corners() const {
    return {(*this)(0, 0), (*this)(0, 1), (*this)(1, 0), (*this)(1, 1)};
  }

  Scalar scale() const {
    using std::abs;
    Scalar s = 0;
    for (Scalar c : corners()) s = std::max(s, abs(c));
    return s;
  }

  /// Same payoff with the arguments exchanged: g(p, q) = f(q, p).
  PayoffSurface transposed() const { return {k_pq, k_q, k_p, k_0}; }

  bool all_finite() const {
    using std::isfinite;
    return isfinite(k_pq) && isfinite(k_p) && isfinite(k_q) && isfinite(k_0);
  }

  bool operator==(const PayoffSurface&) const = default;
};

template <typename Scalar>
struct SurfacePair {
  PayoffSurface<Scalar> alice;
  PayoffSurface<Scalar> bob;

  Scalar scale() const { return std::max(alice.scale(), bob.scale()); }
};

namespace detail {

// Surface coefficients from the payoff under each pure tactic combination.
// v_ab is the expectation of the diagonal operator when Alice applies a and
// Bob applies b, each in {I, C}; the payoff is then the bilinear interpolation
// pq v_II + p(1-q) v_IC + (1-p)q v_CI + (1-p)(1-q) v_CC.
template <typename Scalar>
PayoffSurface<Scalar> surface_from_operator(const Diagonal4<Scalar>& diag,
                                            const Diagonal4<Scalar>& probs) {
  auto value = [&](int flip_mask) {
    Scalar v = 0;
    for (int x = 0; x < 4; ++x) v += diag(x) * probs(x ^ flip_mask);
    return v;
  };
  const Scalar v_ii = value(0), v_ic = value(1), v_ci = value(2), v_cc = value(3);
  return {v_ii - v_ic - v_ci + v_cc, v_ic - v_cc, v_ci - v_cc, v_cc};
}

}  // namespace detail

/// Closed-form bilinear payoff surfaces for both players. Only the squared
/// moduli of the amplitudes enter.
template <typename Scalar>
SurfacePair<Scalar> payoff_surface(const InitialState<Scalar>& state,
                                   const BimatrixGame2x2<Scalar>& game) {
  const auto ops = payoff_operators(game);
  const Diagonal4<Scalar> probs = state.probabilities();
  return {detail::surface_from_operator(ops.diag_a, probs),
          detail::surface_from_operator(ops.diag_b, probs)};
}

enum class SymmetryCriterion { Moduli, Amplitudes };

/// |HD> and |DH> weights equal, so that $_B(p, q) = $_A(q, p) for a symmetric
/// underlying game. `Amplitudes` compares the complex amplitudes themselves.
template <typename Scalar>
bool is_symmetric(const InitialState<Scalar>& state, Scalar tol,
                  SymmetryCriterion criterion = SymmetryCriterion::Moduli) {
  using std::abs;
  if (criterion == SymmetryCriterion::Amplitudes) return abs(state.amp_hd() - state.amp_dh()) < tol;
  return abs(std::norm(state.amp_hd()) - std::norm(state.amp_dh())) < tol;
}

/// True when surf_b(p, q) = surf_a(q, p) coefficient-wise within tol.
template <typename Scalar>
bool surfaces_symmetric(const PayoffSurface<Scalar>& a, const PayoffSurface<Scalar>& b,
                        Scalar tol) {
  using std::abs;
  const auto t = a.transposed();
  return abs(t.k_pq - b.k_pq) <= tol && abs(t.k_p - b.k_p) <= tol && abs(t.k_q - b.k_q) <= tol &&
         abs(t.k_0 - b.k_0) <= tol;
}

}  // namespace qhd
