#pragma once

// Normal-form arithmetic in the submonoid P of the group
//   G = < a, b : a b^c = b^d a >,   c, d >= 1,
// generated by a and b.  Every element of P has a unique normal form
//   b^{s_0} a b^{s_1} a ... b^{s_{k-1}} a b^{s_k}
// with 0 <= s_i < d for i < k and s_k >= 0.  The pair
// (stem exponents s_0..s_{k-1}, tail s_k) is the Word value type; the word
// with the tail removed is its "stem", and the number of a's is its "height".
//
// Rewriting is driven by the single rule  b^d a -> a b^c : pushing an
// exponent t through one 'a' leaves t mod d behind and carries (t div d) * c
// to the right.  Carries and tails can grow without bound (they pick up a
// factor c/d per crossing), so they are arbitrary-precision integers; stem
// exponents are bounded by d and stay machine-width.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace bskms {

using BigInt = boost::multiprecision::cpp_int;
using Exp = std::int64_t;

struct Params {
  Exp c = 1;
  Exp d = 1;

  Params(Exp c_, Exp d_) : c(c_), d(d_) {
    if (c < 1 || d < 1) throw DomainError("Params: c and d must be >= 1");
  }
};

struct Word {
  std::vector<Exp> stem_exps;  // each in [0, d)
  BigInt tail = 0;             // >= 0

  Word() = default;
  Word(std::vector<Exp> exps, BigInt t)
      : stem_exps(std::move(exps)), tail(std::move(t)) {}

  Exp height() const { return static_cast<Exp>(stem_exps.size()); }
  bool is_identity() const { return stem_exps.empty() && tail == 0; }
  bool is_stem() const { return tail == 0; }

  friend bool operator==(const Word&, const Word&) = default;
};

// Total order by (height, stem exponents lex, tail); used for canonical
// enumeration and as the key order of word-indexed maps.
struct WordLess {
  bool operator()(const Word& x, const Word& y) const {
    if (x.height() != y.height()) return x.height() < y.height();
    if (x.stem_exps != y.stem_exps) return x.stem_exps < y.stem_exps;
    return x.tail < y.tail;
  }
};

inline Word bpow(BigInt t) { return Word({}, std::move(t)); }

inline Exp height(const Word& x) { return x.height(); }

inline Word stem(const Word& x) { return Word(x.stem_exps, 0); }

// --- raw letter sequences -------------------------------------------------

// Run-length encoded letter string over {a, b}; the input alphabet for
// normalization and for the text parser.  Counts may be arbitrarily large.
struct Run {
  char letter;   // 'a' or 'b'
  BigInt count;  // >= 0
  friend bool operator==(const Run&, const Run&) = default;
};
using Letters = std::vector<Run>;

// Right-multiplies the normal form (exps, tail) by one 'a':
// b^t a = b^(t mod d) a b^((t div d) * c).
inline void push_a(const Params& P, std::vector<Exp>& exps, BigInt& tail) {
  const BigInt q = tail / P.d;
  exps.push_back(static_cast<Exp>(tail - q * P.d));
  tail = q * P.c;
}

// Rewrites a letter sequence to its unique normal form.  Linear in the
// letter count; `height_cap` guards pathological 'a'-run inputs.
inline Word normalize(const Params& P, const Letters& u,
                      Exp height_cap = 1 << 20) {
  std::vector<Exp> exps;
  BigInt tail = 0;
  for (const Run& run : u) {
    if (run.count < 0) throw DomainError("normalize: negative letter count");
    if (run.letter == 'b') {
      tail += run.count;
    } else if (run.letter == 'a') {
      if (BigInt(exps.size()) + run.count > height_cap)
        throw SizeCapError("normalize: height exceeds cap");
      for (BigInt i = 0; i < run.count; ++i) push_a(P, exps, tail);
    } else {
      throw DomainError(std::string("normalize: bad letter '") + run.letter +
                        "'");
    }
  }
  return Word(std::move(exps), std::move(tail));
}

// Product in P: appends y's letters to x's normal form.  The result is the
// normal form of the concatenation, so multiply is associative with identity
// Word{}.
inline Word multiply(const Params& P, const Word& x, const Word& y) {
  std::vector<Exp> exps = x.stem_exps;
  exps.reserve(x.stem_exps.size() + y.stem_exps.size());
  BigInt tail = x.tail;
  for (Exp s : y.stem_exps) {
    tail += s;
    push_a(P, exps, tail);
  }
  tail += y.tail;
  return Word(std::move(exps), std::move(tail));
}

// --- text form ------------------------------------------------------------

// Grammar: whitespace-separated-or-juxtaposed tokens, each 'a', 'b',
// 'a^N', 'b^N' (N a nonnegative decimal integer), or 'e' for the identity.
inline Letters parse_letters(const std::string& text) {
  Letters runs;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (ch == 'e') {
      ++i;
      continue;
    }
    if (ch != 'a' && ch != 'b')
      throw ParseError(std::string("unexpected character '") + ch +
                           "' in word",
                       i);
    ++i;
    BigInt count = 1;
    if (i < n && text[i] == '^') {
      ++i;
      const std::size_t start = i;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw ParseError("expected digits after '^'", start);
      count = BigInt(text.substr(start, i - start));
    }
    runs.push_back(Run{ch, std::move(count)});
  }
  return runs;
}

inline Word parse_word(const Params& P, const std::string& text) {
  return normalize(P, parse_letters(text));
}

inline std::string format_word(const Word& x) {
  if (x.is_identity()) return "e";
  std::string out;
  auto emit = [&out](const char* tok) {
    if (!out.empty()) out += ' ';
    out += tok;
  };
  auto emit_b = [&](const BigInt& e) {
    if (e == 1)
      emit("b");
    else if (e > 1)
      emit(("b^" + e.str()).c_str());
  };
  for (Exp s : x.stem_exps) {
    emit_b(BigInt(s));
    emit("a");
  }
  emit_b(x.tail);
  return out;
}

// --- stem enumeration -----------------------------------------------------

// Mixed-radix rank of a stem at its height: most significant digit first, so
// ranks follow the lexicographic order of the exponent vector.
inline std::int64_t stem_rank(const Params& P, const Word& sigma) {
  std::int64_t r = 0;
  for (Exp s : sigma.stem_exps) r = r * P.d + s;
  return r;
}

inline Word stem_unrank(const Params& P, Exp k, std::int64_t rank) {
  std::vector<Exp> exps(static_cast<std::size_t>(k));
  for (Exp i = k; i-- > 0;) {
    exps[static_cast<std::size_t>(i)] = static_cast<Exp>(rank % P.d);
    rank /= P.d;
  }
  return Word(std::move(exps), 0);
}

// Number of stems of height k (d^k), guarded by `cap`.
inline std::int64_t stem_count(const Params& P, Exp k,
                               std::int64_t cap = 1'000'000) {
  std::int64_t n = 1;
  for (Exp i = 0; i < k; ++i) {
    if (n > cap / P.d) throw SizeCapError("stem enumeration exceeds cap");
    n *= P.d;
  }
  if (n > cap) throw SizeCapError("stem enumeration exceeds cap");
  return n;
}

// Visits all stems of height k in lexicographic order without materializing
// them; `fn` receives a reused const Word&.
template <typename F>
void for_each_stem(const Params& P, Exp k, F&& fn,
                   std::int64_t cap = 1'000'000) {
  const std::int64_t n = stem_count(P, k, cap);
  Word sigma(std::vector<Exp>(static_cast<std::size_t>(k), 0), 0);
  for (std::int64_t r = 0; r < n; ++r) {
    fn(static_cast<const Word&>(sigma));
    for (Exp i = k; i-- > 0;) {
      auto& digit = sigma.stem_exps[static_cast<std::size_t>(i)];
      if (++digit < P.d) break;
      digit = 0;
    }
  }
}

// All stems of height k in lexicographic order.
inline std::vector<Word> stems_of_height(const Params& P, Exp k,
                                         std::int64_t cap = 1'000'000) {
  const std::int64_t n = stem_count(P, k, cap);
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(n));
  std::vector<Exp> exps(static_cast<std::size_t>(k), 0);
  for (std::int64_t r = 0; r < n; ++r) {
    out.emplace_back(exps, 0);
    // odometer increment on the last position
    for (Exp i = k; i-- > 0;) {
      auto& digit = exps[static_cast<std::size_t>(i)];
      if (++digit < P.d) break;
      digit = 0;
    }
  }
  return out;
}

// --- shifting b-powers through stems --------------------------------------

struct Shifted {
  Word stem;     // stem(b^m sigma)
  BigInt carry;  // b^m sigma = stem(b^m sigma) b^carry
};

// Pushes b^m through the stem sigma letter by letter.  Each crossing of one
// 'a' maps the incoming shift m and exponent s to residue (m + s) mod d and
// outgoing shift ((m + s) div d) * c.
inline Shifted stem_shift(const Params& P, const BigInt& m, const Word& sigma) {
  std::vector<Exp> exps;
  exps.reserve(sigma.stem_exps.size());
  BigInt carry = m;
  for (Exp s : sigma.stem_exps) {
    carry += s;
    const BigInt q = carry / P.d;
    exps.push_back(static_cast<Exp>(carry - q * P.d));
    carry = q * P.c;
  }
  return Shifted{Word(std::move(exps), 0), std::move(carry)};
}

struct Unshifted {
  Word stem;    // tau with b^m tau = sigma b^shift
  BigInt shift;
};

// Inverts stem_shift on the target stem: given sigma and m, finds the unique
// stem tau of the same height and the residual shift r with
// b^m tau = sigma b^r.  Letter by letter: for incoming shift m and target
// exponent j, the source exponent is t = (j - m) mod d and the shift crossing
// the 'a' is ((m + t - j) / d) * c.
inline Unshifted stem_shift_inv(const Params& P, const BigInt& m,
                                const Word& sigma) {
  std::vector<Exp> exps;
  exps.reserve(sigma.stem_exps.size());
  BigInt shift = m;
  for (Exp j : sigma.stem_exps) {
    BigInt t = (BigInt(j) - shift) % P.d;
    if (t < 0) t += P.d;
    const BigInt n = (shift + t - j) / P.d;
    exps.push_back(static_cast<Exp>(t));
    shift = n * P.c;
  }
  return Unshifted{Word(std::move(exps), 0), std::move(shift)};
}

// --- least upper bounds in the left-divisibility order --------------------

// x <= z iff z is in xP.  Any two elements admit either no common upper
// bound or a least one; `finite` distinguishes the cases.  When finite,
// join = x * x_comp = y * y_comp, and at least one complement is a pure
// b-power.
struct JoinResult {
  bool finite = false;
  Word join;
  Word x_comp;
  Word y_comp;

  static JoinResult infinite() { return JoinResult{}; }
  static JoinResult make(Word j, Word xc, Word yc) {
    return JoinResult{true, std::move(j), std::move(xc), std::move(yc)};
  }
};

inline JoinResult join(const Params& P, const Word& x, const Word& y) {
  const bool swapped = x.height() > y.height();
  const Word& lo = swapped ? y : x;
  const Word& hi = swapped ? x : y;

  if (lo.height() == hi.height()) {
    // Same height: bounded above iff the stems agree; the join keeps the
    // stem and the larger tail.
    if (lo.stem_exps != hi.stem_exps) return JoinResult::infinite();
    const BigInt m = std::max(x.tail, y.tail);
    return JoinResult::make(Word(lo.stem_exps, m), bpow(m - x.tail),
                            bpow(m - y.tail));
  }

  // Strictly lower height: bounded above iff stem(lo) is a prefix of
  // stem(hi).  Writing lo = stem(lo) b^s and hi = stem(lo) sigma b^n, solve
  // b^s tau = sigma b^r; the join is stem(hi) b^max(n, r).
  if (!std::equal(lo.stem_exps.begin(), lo.stem_exps.end(),
                  hi.stem_exps.begin()))
    return JoinResult::infinite();
  Word sigma(std::vector<Exp>(hi.stem_exps.begin() + lo.stem_exps.size(),
                              hi.stem_exps.end()),
             0);
  const BigInt& s = lo.tail;
  const BigInt& n = hi.tail;
  auto [tau, r] = stem_shift_inv(P, s, sigma);
  const BigInt m = std::max(n, r);
  Word j(hi.stem_exps, m);
  Word lo_comp(std::move(tau.stem_exps), m - r);
  Word hi_comp = bpow(m - n);
  if (swapped)
    return JoinResult::make(std::move(j), std::move(hi_comp),
                            std::move(lo_comp));
  return JoinResult::make(std::move(j), std::move(lo_comp),
                          std::move(hi_comp));
}

inline bool leq(const Params& P, const Word& x, const Word& z) {
  const JoinResult jr = join(P, x, z);
  return jr.finite && jr.join == z;
}

// --- carry chains ---------------------------------------------------------

// kappa(t): how many times the rewrite t -> (t/d)*c can be applied starting
// from t with every intermediate value divisible by d.  Infinite exactly
// when t = 0 or (d | c and d | t); in particular always finite when d does
// not divide c and t >= 1.
struct CarryDepth {
  bool finite = true;
  Exp kappa = 0;  // meaningful when finite

  static CarryDepth infinite() { return CarryDepth{false, 0}; }
  static CarryDepth of(Exp k) { return CarryDepth{true, k}; }
  friend bool operator==(const CarryDepth&, const CarryDepth&) = default;
};

inline CarryDepth carry_depth(const Params& P, const BigInt& t) {
  if (t == 0) return CarryDepth::infinite();
  if (t < 0) throw DomainError("carry_depth: negative exponent");
  BigInt u = t;
  Exp k = 0;
  while (u % P.d == 0) {
    if (P.c % P.d == 0) return CarryDepth::infinite();
    u = (u / P.d) * P.c;
    ++k;
  }
  return CarryDepth::of(k);
}

// c^k d^{-k} t, defined when the first k steps of the carry chain divide
// exactly (always true for k <= kappa(t)).
inline BigInt carried_exponent(const Params& P, const BigInt& t, Exp k) {
  BigInt u = t;
  for (Exp i = 0; i < k; ++i) {
    if (u % P.d != 0)
      throw DomainError("carried_exponent: chain breaks before k");
    u = (u / P.d) * P.c;
  }
  return u;
}

}  // namespace bskms
