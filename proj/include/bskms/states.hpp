#pragma once

// States of the Toeplitz algebra of P, presented by their values on the
// spanning elements T_x T_y^*.  Every state built here vanishes unless x and
// y have the same height and the same stem, so it is determined by a single
// function phi on b-power differences:
//
//   eval(sigma b^s, sigma b^t) = e^{-beta * height} * phi(s - t)
//
// (conjugated when s < t).  The constructions differ only in phi:
//
//   kms_state            phi(t) = (1 - e^{-beta} d) (M_t + sum_{k} (e^{-beta} d)^k M_{c^k d^-k t})
//                        where k runs over the carry chain of t and M_n are
//                        the moments of a circle measure,
//   critical_state       phi(t) = [t = 0]       at beta = ln d,
//   critical_limit_state the beta -> ln d limit of kms_state when d | c,
//   ground_state         values of a state of the shift Toeplitz algebra,
//                        supported at height zero (beta = +infinity).
//
// recover_moments inverts the first formula: when d does not divide c the
// carry chain of every t >= 1 is finite and strictly shortens, so the system
// is triangular and the measure moments can be read back from state values.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "measure.hpp"
#include "words.hpp"

namespace bskms {

inline double critical_beta(const Params& P) {
  return std::log(static_cast<double>(P.d));
}

// --- values on b-powers ---------------------------------------------------

struct BtTerm {
  Exp k;          // series index
  BigInt index;   // moment index c^k d^-k t
  Complex value;  // (1 - q) q^k M_index, q = e^{-beta} d
};

struct BtSeries {
  Complex value;
  double tail_bound = 0;  // bound on the neglected tail (0 for finite sums)
  std::vector<BtTerm> terms;
};

// Evaluates psi_{beta,mu}(T_{b^t}) term by term.  The index set of the
// series is the carry chain of t: it is finite when the chain breaks, and
// geometric truncation at term bound `eps` applies otherwise (t = 0, or
// d | c with d | t).
inline BtSeries kms_bt_series(const Params& P, double beta, const Measure& mu,
                              const BigInt& t, double eps = 1e-15) {
  if (t < 0) throw DomainError("kms_bt: exponent must be >= 0");
  const double q = std::exp(-beta) * static_cast<double>(P.d);
  if (!(q < 1.0)) throw DomainError("kms_bt: beta must exceed ln d");

  BtSeries out;
  out.terms.push_back(BtTerm{0, t, (1.0 - q) * moment(mu, t)});
  BigInt u = t;
  double qk = 1.0;
  for (Exp k = 1;; ++k) {
    if (t == 0) {
      if (u != 0) break;  // unreachable; keeps the chain rule uniform
    } else if (u % P.d != 0) {
      break;  // chain breaks: finite sum, no tail
    }
    if (t != 0) u = (u / P.d) * P.c;
    qk *= q;
    if (qk < eps) {
      out.tail_bound = qk / (1.0 - q);
      break;
    }
    out.terms.push_back(BtTerm{k, u, (1.0 - q) * qk * moment(mu, u)});
  }
  Complex acc(0, 0);
  for (const BtTerm& term : out.terms) acc += term.value;
  out.value = acc;
  return out;
}

// Point value psi_{beta,mu}(T_{b^t}).  t = 0 is the unit of the algebra, so
// the value is pinned to 1 exactly rather than summed.
inline Complex kms_bt(const Params& P, double beta, const Measure& mu,
                      const BigInt& t) {
  if (t == 0) {
    if (!(std::exp(-beta) * static_cast<double>(P.d) < 1.0))
      throw DomainError("kms_bt: beta must exceed ln d");
    return Complex(1, 0);
  }
  return kms_bt_series(P, beta, mu, t).value;
}

// --- states on spanning pairs ---------------------------------------------

enum class StateKind { KMS, Critical, Ground };

struct SpanState {
  StateKind kind = StateKind::KMS;
  double beta = 0;  // +infinity for ground states
  std::function<Complex(const Word&, const Word&)> eval;
};

// Wraps a b-power value function phi in the common spanning-pair structure.
inline SpanState state_from_bt(StateKind kind, double beta,
                               std::function<Complex(const BigInt&)> phi) {
  auto eval = [beta, phi = std::move(phi)](const Word& x,
                                           const Word& y) -> Complex {
    if (x.height() != y.height()) return Complex(0, 0);
    if (x.stem_exps != y.stem_exps) return Complex(0, 0);
    const double scale = std::exp(-beta * static_cast<double>(x.height()));
    if (x.tail >= y.tail) return scale * phi(x.tail - y.tail);
    return scale * std::conj(phi(y.tail - x.tail));
  };
  return SpanState{kind, beta, std::move(eval)};
}

inline SpanState kms_state(const Params& P, double beta, const Measure& mu) {
  if (!(std::exp(-beta) * static_cast<double>(P.d) < 1.0))
    throw DomainError("kms_state: beta must exceed ln d");
  return state_from_bt(
      StateKind::KMS, beta,
      [P, beta, mu](const BigInt& t) { return kms_bt(P, beta, mu, t); });
}

// The unique KMS state at beta = ln d when d does not divide c:
// psi(T_x T_y^*) = [x = y] d^{-height(x)}.
inline SpanState critical_state(const Params& P) {
  return state_from_bt(StateKind::Critical, critical_beta(P),
                       [](const BigInt& t) {
                         return Complex(t == 0 ? 1 : 0, 0);
                       });
}

// The beta -> ln d limit of kms_state(beta, mu), which exists in closed form
// when d | c:
//   c = d:  phi(t) = M_t          when d | t, else 0  (any mu);
//   c > d:  phi(t) = [r | t][d | t] for mu uniform on the r-th roots of
//           unity, r = c/d; Haar reproduces the critical state.
// These are the families witnessing non-uniqueness at the critical inverse
// temperature; other measures have no closed-form limit here and are
// rejected.
inline SpanState critical_limit_state(const Params& P, const Measure& mu) {
  if (P.c % P.d != 0)
    throw DomainError("critical_limit_state: requires d | c");
  std::function<Complex(const BigInt&)> phi;
  if (P.c == P.d) {
    phi = [P, mu](const BigInt& t) {
      return t % P.d == 0 ? moment(mu, t) : Complex(0, 0);
    };
  } else if (mu.kind == Measure::Kind::Haar) {
    phi = [](const BigInt& t) { return Complex(t == 0 ? 1 : 0, 0); };
  } else if (mu.kind == Measure::Kind::RootsUniform &&
             mu.order == P.c / P.d) {
    const std::int64_t r = P.c / P.d;
    phi = [P, r](const BigInt& t) {
      return (t % P.d == 0 && t % r == 0) ? Complex(1, 0) : Complex(0, 0);
    };
  } else {
    throw DomainError(
        "critical_limit_state: closed form known for Haar and the uniform "
        "root measure of order c/d only");
  }
  return state_from_bt(StateKind::Critical, critical_beta(P), std::move(phi));
}

// --- ground states --------------------------------------------------------

// A ground state is induced by a state omega of the Toeplitz algebra of the
// unilateral shift S: it vanishes off height zero and
// eval(b^s, b^t) = omega(S^s S^{*t}).
struct VectorState {
  std::vector<Complex> xi;  // finite support, unit l2 norm
};
struct MeasureState {
  Measure mu;  // omega(S^s S^{*t}) = M_{s-t}
};
using GroundSpec = std::variant<VectorState, MeasureState>;

inline GroundSpec vector_state(std::vector<Complex> xi) {
  double norm2 = 0;
  for (const Complex& z : xi) norm2 += std::norm(z);
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw DomainError("vector_state: coefficients must have unit norm");
  return VectorState{std::move(xi)};
}

inline GroundSpec measure_state(Measure mu) {
  return MeasureState{std::move(mu)};
}

// omega(S^s S^{*t}) for the underlying shift-algebra state.
inline Complex shift_moment(const GroundSpec& g, const BigInt& s,
                            const BigInt& t) {
  if (const auto* m = std::get_if<MeasureState>(&g))
    return moment(m->mu, s - t);
  const auto& xi = std::get<VectorState>(g).xi;
  const BigInt n = BigInt(xi.size());
  if (s >= n || t >= n) return Complex(0, 0);
  const std::size_t s64 = s.convert_to<std::size_t>();
  const std::size_t t64 = t.convert_to<std::size_t>();
  Complex acc(0, 0);
  for (std::size_t m = 0; m + s64 < xi.size() && m + t64 < xi.size(); ++m)
    acc += xi[m + t64] * std::conj(xi[m + s64]);
  return acc;
}

inline SpanState ground_state(const GroundSpec& g) {
  auto eval = [g](const Word& x, const Word& y) -> Complex {
    if (x.height() != 0 || y.height() != 0) return Complex(0, 0);
    return shift_moment(g, x.tail, y.tail);
  };
  return SpanState{StateKind::Ground,
                   std::numeric_limits<double>::infinity(), std::move(eval)};
}

// A ground state extends to an infinite-inverse-temperature KMS state iff
// omega kills the rank-one corner: omega(S^m (1 - S S^*) S^{*n}) = 0.  For a
// vector state that value is xi_n conj(xi_m), so only vectors vanishing on
// [0, n_max] pass; measure states always do.
inline bool is_kms_infty(const GroundSpec& g, Exp n_max, double tol = 1e-12) {
  if (std::holds_alternative<MeasureState>(g)) return true;
  const auto& xi = std::get<VectorState>(g).xi;
  double mx = 0;
  for (Exp m = 0; m <= n_max; ++m) {
    const double a =
        m < Exp(xi.size()) ? std::abs(xi[static_cast<std::size_t>(m)]) : 0.0;
    mx = std::max(mx, a);
  }
  return mx * mx <= tol;
}

// --- moment recovery ------------------------------------------------------

// Reads the measure moments M_0..M_{n_max} back from a state's b-power
// values by unwinding the series along carry chains:
//   M_t = eval(b^t, e) / (1 - q) - sum_{k=1}^{kappa(t)} q^k M_{c^k d^-k t}.
// Each chain index has strictly smaller carry depth, so the recursion
// terminates; requires d not dividing c (else chains are infinite).
inline std::vector<Complex> recover_moments(const SpanState& state,
                                            const Params& P, double beta,
                                            std::int64_t n_max) {
  if (P.c % P.d == 0)
    throw DomainError("recover_moments: requires d not dividing c");
  const double q = std::exp(-beta) * static_cast<double>(P.d);
  if (!(q < 1.0)) throw DomainError("recover_moments: beta must exceed ln d");

  std::map<BigInt, Complex> memo;
  std::function<Complex(const BigInt&)> rec =
      [&](const BigInt& t) -> Complex {
    if (t == 0) return Complex(1, 0);
    if (const auto it = memo.find(t); it != memo.end()) return it->second;
    const CarryDepth depth = carry_depth(P, t);
    Complex val = state.eval(bpow(t), Word()) / (1.0 - q);
    BigInt u = t;
    double qk = 1.0;
    for (Exp k = 1; k <= depth.kappa; ++k) {
      u = (u / P.d) * P.c;
      qk *= q;
      val -= qk * rec(u);
    }
    memo.emplace(t, val);
    return val;
  };

  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t t = 0; t <= n_max; ++t) out.push_back(rec(BigInt(t)));
  return out;
}

}  // namespace bskms
