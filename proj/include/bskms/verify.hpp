#pragma once

// Equilibrium-condition checkers for states given on spanning pairs
// T_x T_y^*.  The product of two spanning pairs reduces to a single one
// through the least upper bound (Nica covariance):
//
//   T_y^* T_p = T_{y^{-1}(y v p)} T_{p^{-1}(y v p)}^*,  zero when y v p = inf,
//
// so every check below works with exact word arithmetic plus one or two
// state evaluations; no operator matrices are involved.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "states.hpp"
#include "words.hpp"

namespace bskms {

// --- spanning-pair product reduction --------------------------------------

// T_x T_y^* T_p T_q^* = T_m T_n^* (or zero).
struct Reduced {
  bool nonzero = false;
  Word m;
  Word n;

  static Reduced zero_product() { return Reduced{}; }
  static Reduced span(Word m, Word n) {
    return Reduced{true, std::move(m), std::move(n)};
  }
  friend bool operator==(const Reduced&, const Reduced&) = default;
};

inline Reduced reduce_product(const Params& P, const Word& x, const Word& y,
                              const Word& p, const Word& q) {
  const JoinResult jr = join(P, y, p);
  if (!jr.finite) return Reduced::zero_product();
  return Reduced::span(multiply(P, x, jr.x_comp), multiply(P, q, jr.y_comp));
}

inline Complex eval_reduced(const SpanState& state, const Reduced& r) {
  return r.nonzero ? state.eval(r.m, r.n) : Complex(0, 0);
}

// --- check reports --------------------------------------------------------

struct Witness {
  std::string what;
  double residual = 0;
};

struct CheckReport {
  std::int64_t pairs_checked = 0;
  std::int64_t quads_checked = 0;
  double max_residual = 0;
  std::vector<Witness> witnesses;
  static constexpr std::size_t witness_cap = 20;

  template <typename Describe>
  void record(double res, double tol, Describe&& describe) {
    if (std::isnan(res)) res = std::numeric_limits<double>::infinity();
    max_residual = std::max(max_residual, res);
    if (res > tol && witnesses.size() < witness_cap)
      witnesses.push_back(Witness{describe(), res});
  }

  bool pass(double tol) const { return max_residual <= tol; }

  std::string to_text() const {
    std::ostringstream os;
    os << "pairs checked: " << pairs_checked
       << ", quads checked: " << quads_checked
       << ", max residual: " << max_residual << '\n';
    for (const Witness& w : witnesses)
      os << "  witness " << w.what << " residual " << w.residual << '\n';
    return os.str();
  }
};

// e^{-beta h} with the h = 0 case kept finite even at beta = +infinity
inline double height_weight(double beta, Exp h) {
  if (h == 0) return 1.0;
  return std::exp(-beta * static_cast<double>(h));
}

// --- structural form of equilibrium states --------------------------------

// Checks that a state has the structure shared by every equilibrium state
// at inverse temperature state.beta:
//   (unit)    eval(e, e) = 1
//   (herm)    eval(x, y) = conj(eval(y, x))
//   (gate)    eval(x, y) = 0 unless stems and heights agree
//   (scale)   eval(sigma b^s, sigma b^t) = e^{-beta height} eval(b^s, b^t)
//   (tail)    eval(b^s, b^t) depends on s - t only
inline CheckReport verify_charkms(const SpanState& state,
                                  const std::vector<Word>& words, double tol) {
  CheckReport report;
  const double beta = state.beta;
  report.record(std::abs(state.eval(Word(), Word()) - Complex(1, 0)), tol,
                [] { return std::string("unit (e, e)"); });
  for (const Word& x : words)
    for (const Word& y : words) {
      ++report.pairs_checked;
      const Complex z = state.eval(x, y);
      const auto pair_text = [&] {
        return "(" + format_word(x) + ", " + format_word(y) + ")";
      };
      report.record(std::abs(z - std::conj(state.eval(y, x))), tol,
                    [&] { return "hermitian " + pair_text(); });
      if (x.height() != y.height() || x.stem_exps != y.stem_exps) {
        report.record(std::abs(z), tol,
                      [&] { return "support gate " + pair_text(); });
        continue;
      }
      const double scale = height_weight(beta, x.height());
      const Complex base =
          x.tail >= y.tail
              ? state.eval(bpow(x.tail - y.tail), Word())
              : std::conj(state.eval(bpow(y.tail - x.tail), Word()));
      report.record(std::abs(z - scale * base), tol, [&] {
        return "height scaling " + pair_text();
      });
    }
  return report;
}

// --- full equilibrium condition -------------------------------------------

struct VerifyOptions {
  double tol = 1e-10;
  std::int64_t quad_cap = 200'000;  // exhaustive quads up to this count
  std::int64_t samples = 4000;      // sampled quads beyond the cap
  std::uint64_t seed = 1;
};

// psi(AB) = e^{-beta (height weight of A)} psi(BA) over spanning pairs
// A = T_x T_y^*, B = T_p T_q^*, with both sides reduced exactly.  The
// condition is normalized so the exponential weight never exceeds one.
inline CheckReport verify_full_kms(const Params& P, const SpanState& state,
                                   double beta,
                                   const std::vector<Word>& words,
                                   const VerifyOptions& opts = {}) {
  CheckReport report;
  const std::int64_t n = static_cast<std::int64_t>(words.size());
  if (n == 0) return report;

  const auto check_quad = [&](const Word& x, const Word& y, const Word& p,
                              const Word& q) {
    ++report.quads_checked;
    const Complex ab = eval_reduced(state, reduce_product(P, x, y, p, q));
    const Complex ba = eval_reduced(state, reduce_product(P, p, q, x, y));
    const Exp dh = x.height() - y.height();
    double res;
    if (dh >= 0)
      res = std::abs(ab - height_weight(beta, dh) * ba);
    else
      res = std::abs(height_weight(beta, Exp(-dh)) * ab - ba);
    report.record(res, opts.tol, [&] {
      return "(" + format_word(x) + ", " + format_word(y) + ", " +
             format_word(p) + ", " + format_word(q) + ")";
    });
  };

  const bool exhaustive = std::pow(static_cast<double>(n), 4) <=
                          static_cast<double>(opts.quad_cap);
  if (exhaustive) {
    for (const Word& x : words)
      for (const Word& y : words)
        for (const Word& p : words)
          for (const Word& q : words) check_quad(x, y, p, q);
  } else {
    std::mt19937_64 rng(opts.seed);
    const auto pick = [&] {
      return words[static_cast<std::size_t>(rng() % std::uint64_t(n))];
    };
    for (std::int64_t i = 0; i < opts.samples; ++i)
      check_quad(pick(), pick(), pick(), pick());
  }
  return report;
}

// --- ground states --------------------------------------------------------

// Defining structure of a zero-temperature state: unital, hermitian,
// annihilating every spanning pair of positive height, and positive
// semidefinite on the span (Gram matrix over the first gram_cap words).
inline CheckReport verify_ground(const SpanState& state,
                                 const std::vector<Word>& words, double tol,
                                 std::int64_t gram_cap = 48) {
  CheckReport report;
  report.record(std::abs(state.eval(Word(), Word()) - Complex(1, 0)), tol,
                [] { return std::string("unit (e, e)"); });
  for (const Word& x : words)
    for (const Word& y : words) {
      ++report.pairs_checked;
      const Complex z = state.eval(x, y);
      const auto pair_text = [&] {
        return "(" + format_word(x) + ", " + format_word(y) + ")";
      };
      report.record(std::abs(z - std::conj(state.eval(y, x))), tol,
                    [&] { return "hermitian " + pair_text(); });
      if (x.height() > 0 || y.height() > 0)
        report.record(std::abs(z), tol, [&] {
          return "positive height " + pair_text();
        });
    }

  const Eigen::Index gn = static_cast<Eigen::Index>(
      std::min<std::int64_t>(gram_cap, static_cast<std::int64_t>(words.size())));
  if (gn > 0) {
    Eigen::MatrixXcd g(gn, gn);
    for (Eigen::Index i = 0; i < gn; ++i)
      for (Eigen::Index j = 0; j < gn; ++j)
        g(i, j) = state.eval(words[static_cast<std::size_t>(i)],
                             words[static_cast<std::size_t>(j)]);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        (g + g.adjoint()) / 2.0);
    const double min_eig = es.eigenvalues().minCoeff();
    report.record(std::max(0.0, -min_eig), tol,
                  [&] { return std::string("gram positivity"); });
  }
  return report;
}

// --- phase boundary -------------------------------------------------------

struct PhaseFeasibility {
  bool feasible = false;   // equilibrium states exist at this beta
  double slack = 0;        // 1 - e^{-beta} d; positive strictly above ln d
  double beta_min = 0;     // ln d
};

inline PhaseFeasibility phase_feasible(const Params& P, double beta) {
  const double beta_min = std::log(static_cast<double>(P.d));
  return PhaseFeasibility{beta >= beta_min - 1e-12,
                          1.0 - std::exp(-beta) * static_cast<double>(P.d),
                          beta_min};
}

}  // namespace bskms
