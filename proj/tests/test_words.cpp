#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <bskms/words.hpp>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace bskms;

namespace {
const std::vector<Params> kDeskParams = {
    {2, 3}, {3, 2}, {2, 2}, {4, 2}, {8, 12}};
}

TEST_CASE("normalize: pinned normal forms") {
  Params P(2, 3);
  CHECK(W(P, "b^3 a") == WE({0}, 2));
  CHECK(W(P, "b^4 a b^5 a") == WE({1, 1}, 4));
  CHECK(W(P, "a") == WE({0}, 0));
  CHECK(W(P, "b") == WE({}, 1));
  CHECK(W(P, "e") == WE({}, 0));
  CHECK(W(P, "b^2") == WE({}, 2));
  CHECK(W(P, "a b^2") == WE({0}, 2));

  Params Q(3, 2);
  CHECK(W(Q, "b^3 a") == WE({1}, 3));
  CHECK(W(Q, "b^5 a b a") == WE({1, 1}, 9));

  Params R(8, 12);
  CHECK(W(R, "b^25 a") == WE({1}, 16));
}

TEST_CASE("normalize: invariants hold for random inputs") {
  std::mt19937 rng(12345);
  for (const Params& P : kDeskParams) {
    for (int trial = 0; trial < 400; ++trial) {
      const Letters runs = oracle::random_runs(rng, 8, 2 * int(P.d) + 1);
      const Word w = normalize(P, runs);
      for (Exp s : w.stem_exps) {
        CHECK(s >= 0);
        CHECK(s < P.d);
      }
      CHECK(w.tail >= 0);
      // letter count of 'a' is preserved
      BigInt as = 0;
      for (const Run& r : runs)
        if (r.letter == 'a') as += r.count;
      CHECK(BigInt(w.height()) == as);
    }
  }
}

TEST_CASE("normalize: agrees with random-order rewriting") {
  std::mt19937 rng(777);
  for (const Params& P : kDeskParams) {
    for (int trial = 0; trial < 250; ++trial) {
      const Letters runs = oracle::random_runs(rng, 6, 2 * int(P.d) + 1);
      const oracle::Flat reduced =
          oracle::rewrite_randomly(P, oracle::flat_of_runs(runs), rng);
      const Word direct = normalize(P, runs);
      CHECK(reduced == oracle::flat_of_word(direct));
    }
  }
}

TEST_CASE("normalize: huge exponents use exact integers") {
  Params P(2, 3);
  const BigInt n("123456789012345678901234567890");
  const Word w = normalize(P, {{'b', n}, {'a', 1}});
  CHECK(w.height() == 1);
  CHECK(w.stem_exps[0] == Exp(n % 3));
  CHECK(w.tail == (n / 3) * 2);
}

TEST_CASE("normalize: height cap guards huge a-runs") {
  Params P(2, 3);
  CHECK_THROWS_AS(normalize(P, {{'a', BigInt(1) << 30}}), SizeCapError);
}

TEST_CASE("multiply: associative monoid with identity") {
  std::mt19937 rng(31337);
  for (const Params& P : kDeskParams) {
    const Word e;
    for (int trial = 0; trial < 200; ++trial) {
      const Word x = normalize(P, oracle::random_runs(rng, 5, 2 * int(P.d)));
      const Word y = normalize(P, oracle::random_runs(rng, 5, 2 * int(P.d)));
      const Word z = normalize(P, oracle::random_runs(rng, 5, 2 * int(P.d)));
      CHECK(multiply(P, multiply(P, x, y), z) ==
            multiply(P, x, multiply(P, y, z)));
      CHECK(multiply(P, x, e) == x);
      CHECK(multiply(P, e, x) == x);
    }
  }
}

TEST_CASE("multiply: matches normalize of concatenated letters") {
  std::mt19937 rng(999);
  for (const Params& P : kDeskParams) {
    for (int trial = 0; trial < 200; ++trial) {
      Letters u = oracle::random_runs(rng, 5, 2 * int(P.d));
      Letters v = oracle::random_runs(rng, 5, 2 * int(P.d));
      Letters uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      CHECK(multiply(P, normalize(P, u), normalize(P, v)) ==
            normalize(P, uv));
    }
  }
}

TEST_CASE("stem and height") {
  Params P(2, 3);
  const Word w = W(P, "b a b a b^4");
  CHECK(height(w) == 2);
  CHECK(stem(w) == WE({1, 1}, 0));
  CHECK(stem(W(P, "b^5")) == Word());
}

TEST_CASE("text form: round trips and errors") {
  Params P(2, 3);
  for (const char* s : {"e", "a", "b", "a b^2", "b a b a b^4", "b^2 a b^12"}) {
    const Word w = W(P, s);
    CHECK(parse_word(P, format_word(w)) == w);
  }
  // normal-form output of a non-normal input
  CHECK(format_word(W(P, "b^3 a")) == "a b^2");
  CHECK(format_word(Word()) == "e");

  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      parse_letters(text);
    } catch (const ParseError& err) {
      return err.position;
    }
    return std::string::npos;
  };
  CHECK(position_of("xa") == 0);
  CHECK(position_of("a x") == 2);
  CHECK(position_of("b^") == 2);
  CHECK(position_of("b^ 2") == 2);
  CHECK_THROWS_AS(parse_word(P, "b^"), ParseError);
}

TEST_CASE("stems_of_height: lexicographic, complete, capped") {
  for (const Params& P : kDeskParams) {
    for (Exp k = 0; k <= 3; ++k) {
      const auto stems = stems_of_height(P, k);
      std::int64_t expect = 1;
      for (Exp i = 0; i < k; ++i) expect *= P.d;
      REQUIRE(std::int64_t(stems.size()) == expect);
      CHECK(std::is_sorted(stems.begin(), stems.end(), WordLess{}));
      const std::set<std::vector<Exp>> distinct = [&] {
        std::set<std::vector<Exp>> s;
        for (const Word& w : stems) s.insert(w.stem_exps);
        return s;
      }();
      CHECK(distinct.size() == stems.size());
      for (std::int64_t r = 0; r < expect; ++r) {
        CHECK(stem_rank(P, stems[std::size_t(r)]) == r);
        CHECK(stem_unrank(P, k, r) == stems[std::size_t(r)]);
      }
    }
  }
  CHECK_THROWS_AS(stems_of_height(Params(2, 3), 20), SizeCapError);
}

TEST_CASE("stem_shift: pinned level-1 action") {
  Params P(2, 3);
  // b * (b^i a) walks the 3-cycle a -> ba -> b^2 a -> a with carry 2 on wrap
  auto sh = stem_shift(P, 1, WE({0}, 0));
  CHECK(sh.stem == WE({1}, 0));
  CHECK(sh.carry == 0);
  sh = stem_shift(P, 1, WE({1}, 0));
  CHECK(sh.stem == WE({2}, 0));
  CHECK(sh.carry == 0);
  sh = stem_shift(P, 1, WE({2}, 0));
  CHECK(sh.stem == WE({0}, 0));
  CHECK(sh.carry == 2);
}

TEST_CASE("stem_shift: defines the word product b^m sigma") {
  std::mt19937 rng(4242);
  for (const Params& P : kDeskParams) {
    for (Exp k = 0; k <= 3; ++k) {
      for (const Word& sigma : stems_of_height(P, k)) {
        for (int m = 0; m <= 3 * int(P.d); ++m) {
          const auto [st, carry] = stem_shift(P, m, sigma);
          CHECK(multiply(P, bpow(m), sigma) == Word(st.stem_exps, carry));
          CHECK(st.height() == k);
        }
      }
    }
  }
  (void)rng;
}

TEST_CASE("stem_shift: permutes the stems of each height") {
  for (const Params& P : kDeskParams) {
    const Exp kmax = P.d > 4 ? 2 : 4;
    for (Exp k = 0; k <= kmax; ++k) {
      const auto stems = stems_of_height(P, k);
      for (int m = 0; m <= 3 * int(P.d); ++m) {
        std::set<std::vector<Exp>> image;
        for (const Word& sigma : stems)
          image.insert(stem_shift(P, m, sigma).stem.stem_exps);
        CHECK(image.size() == stems.size());
      }
    }
  }
}

TEST_CASE("stem_shift_inv: inverts stem_shift") {
  for (const Params& P : kDeskParams) {
    for (Exp k = 0; k <= 3; ++k) {
      for (const Word& sigma : stems_of_height(P, k)) {
        for (int m = 0; m <= 3 * int(P.d); ++m) {
          const auto [tau, r] = stem_shift_inv(P, m, sigma);
          const auto [st, carry] = stem_shift(P, m, tau);
          CHECK(st == sigma);
          CHECK(carry == r);
        }
      }
    }
  }
}

TEST_CASE("left multiplication by a-words is injective on stems") {
  // x -> stem((b^c a) x) maps stems of height k injectively into height k+1
  for (const Params& P : kDeskParams) {
    const Word bca = multiply(P, bpow(P.c), W(P, "a"));
    const Exp kmax = P.d > 4 ? 2 : 3;
    for (Exp k = 0; k <= kmax; ++k) {
      std::set<std::vector<Exp>> image;
      const auto stems = stems_of_height(P, k);
      for (const Word& x : stems) {
        const Word y = stem(multiply(P, bca, x));
        CHECK(y.height() == k + 1);
        image.insert(y.stem_exps);
      }
      CHECK(image.size() == stems.size());
    }
  }
}

TEST_CASE("stems factor through products: stem(x stem(y)) = stem(xy)") {
  for (const Params& P : kDeskParams) {
    const auto ball = oracle::ball_words(P, 2, std::int64_t(P.d));
    for (const Word& x : ball) {
      for (const Word& y : ball) {
        const Word xy = multiply(P, x, y);
        const Word xs = multiply(P, x, stem(y));
        CHECK(stem(xs) == stem(xy));
        CHECK(xy.tail == xs.tail + y.tail);
      }
    }
  }
}

TEST_CASE("join: pinned cases") {
  Params P(2, 3);
  SECTION("b vs a") {
    const auto jr = join(P, W(P, "b"), W(P, "a"));
    REQUIRE(jr.finite);
    CHECK(jr.join == W(P, "a b^2"));
    CHECK(jr.x_comp == W(P, "b^2 a"));
    CHECK(jr.y_comp == W(P, "b^2"));
  }
  SECTION("b^4 vs a b") {
    const auto jr = join(P, W(P, "b^4"), W(P, "a b"));
    REQUIRE(jr.finite);
    CHECK(jr.join == W(P, "a b^4"));
    CHECK(jr.x_comp == W(P, "b^2 a"));
    CHECK(jr.y_comp == W(P, "b^3"));
  }
  SECTION("b^4 vs a b^5: upper element wins") {
    const auto jr = join(P, W(P, "b^4"), W(P, "a b^5"));
    REQUIRE(jr.finite);
    CHECK(jr.join == W(P, "a b^5"));
    CHECK(jr.x_comp == W(P, "b^2 a b"));
    CHECK(jr.y_comp == Word());
  }
  SECTION("same height, same stem") {
    const auto jr = join(P, W(P, "a b"), W(P, "a b^3"));
    REQUIRE(jr.finite);
    CHECK(jr.join == W(P, "a b^3"));
    CHECK(jr.x_comp == W(P, "b^2"));
    CHECK(jr.y_comp == Word());
  }
  SECTION("same height, different stems") {
    CHECK_FALSE(join(P, W(P, "a"), W(P, "b a")).finite);
    CHECK_FALSE(join(P, W(P, "a"), W(P, "b^2 a")).finite);
  }
  SECTION("prefix failure at higher height") {
    CHECK_FALSE(join(P, W(P, "b a b^9"), W(P, "b^2 a b a")).finite);
  }
}

TEST_CASE("join: b vs a gives a b^c for every parameter pair") {
  for (const Params& P : kDeskParams) {
    const auto jr = join(P, W(P, "b"), W(P, "a"));
    REQUIRE(jr.finite);
    CHECK(jr.join == multiply(P, W(P, "a"), bpow(P.c)));
  }
}

TEST_CASE("join: b^s vs a b^t case split") {
  // With s = (n-1)d + j, 1 <= j <= d: the join is a b^{nc} when nc > t,
  // and a b^t otherwise.
  for (const Params& P : {Params(2, 3), Params(3, 2), Params(4, 2)}) {
    for (std::int64_t s = 1; s <= 15; ++s) {
      for (std::int64_t t = 0; t <= 15; ++t) {
        const auto jr = join(P, bpow(s), multiply(P, W(P, "a"), bpow(t)));
        REQUIRE(jr.finite);
        const std::int64_t n = (s + P.d - 1) / P.d;
        const BigInt expect = std::max<BigInt>(n * P.c, t);
        CHECK(jr.join == multiply(P, W(P, "a"), bpow(expect)));
      }
    }
  }
}

TEST_CASE("join: complements compose back to the join") {
  for (const Params& P : kDeskParams) {
    const auto ball = oracle::ball_words(P, 2, std::int64_t(P.d) + 2);
    for (const Word& x : ball) {
      for (const Word& y : ball) {
        const auto jr = join(P, x, y);
        const auto rj = join(P, y, x);
        CHECK(jr.finite == rj.finite);
        if (!jr.finite) continue;
        CHECK(jr.join == rj.join);
        CHECK(multiply(P, x, jr.x_comp) == jr.join);
        CHECK(multiply(P, y, jr.y_comp) == jr.join);
        CHECK((jr.x_comp.height() == 0 || jr.y_comp.height() == 0));
        CHECK(leq(P, x, jr.join));
        CHECK(leq(P, y, jr.join));
      }
    }
  }
}

TEST_CASE("leq: pinned cases and order axioms") {
  Params P(2, 3);
  CHECK(leq(P, W(P, "b"), W(P, "a b^2")));
  CHECK_FALSE(leq(P, W(P, "a"), W(P, "b")));
  CHECK_FALSE(leq(P, W(P, "a b^2"), W(P, "b")));
  CHECK(leq(P, Word(), W(P, "b a")));

  const auto ball = oracle::ball_words(P, 2, 4);
  for (const Word& x : ball) {
    CHECK(leq(P, x, x));
    for (const Word& y : ball) {
      if (leq(P, x, y) && leq(P, y, x)) CHECK(x == y);
    }
  }
}

TEST_CASE("leq: agrees with explicit complement existence") {
  std::mt19937 rng(2718);
  for (const Params& P : kDeskParams) {
    const auto ball = oracle::ball_words(P, 2, std::int64_t(P.d));
    for (int trial = 0; trial < 300; ++trial) {
      const Word& x = ball[rng() % ball.size()];
      const Word& w = ball[rng() % ball.size()];
      const Word z = multiply(P, x, w);
      CHECK(leq(P, x, z));
    }
  }
}

TEST_CASE("carry_depth: pinned values") {
  Params P(2, 3);
  CHECK(carry_depth(P, 1) == CarryDepth::of(0));
  CHECK(carry_depth(P, 2) == CarryDepth::of(0));
  CHECK(carry_depth(P, 3) == CarryDepth::of(1));
  CHECK(carry_depth(P, 9) == CarryDepth::of(2));
  CHECK(carry_depth(P, 0) == CarryDepth::infinite());

  Params Q(8, 12);
  CHECK(carry_depth(Q, 27) == CarryDepth::of(0));  // 12 divides (8/12)^2 * 27
  CHECK(carry_depth(Q, 12) == CarryDepth::of(1));
  CHECK(carry_depth(Q, 144) == CarryDepth::of(2));

  CHECK(carry_depth(Params(2, 2), 1) == CarryDepth::of(0));
  CHECK(carry_depth(Params(2, 2), 2) == CarryDepth::infinite());
  CHECK(carry_depth(Params(4, 2), 6) == CarryDepth::infinite());
  CHECK(carry_depth(Params(4, 2), 3) == CarryDepth::of(0));
}

TEST_CASE("carried_exponent: follows the chain and rejects broken chains") {
  Params P(2, 3);
  CHECK(carried_exponent(P, 3, 1) == 2);
  CHECK(carried_exponent(P, 9, 1) == 6);
  CHECK(carried_exponent(P, 9, 2) == 4);
  CHECK_THROWS_AS(carried_exponent(P, 9, 3), DomainError);

  Params Q(8, 12);
  CHECK(carried_exponent(Q, 144, 1) == 96);
  CHECK(carried_exponent(Q, 144, 2) == 64);
}

TEST_CASE("carry chain: every stem below the depth is fixed") {
  struct Case {
    Params P;
    BigInt t;
    Exp kappa;
  };
  for (const Case& cse : {Case{{2, 3}, 9, 2}, Case{{2, 3}, 3, 1},
                          Case{{3, 2}, 4, 2}, Case{{8, 12}, 144, 2}}) {
    REQUIRE(carry_depth(cse.P, cse.t) == CarryDepth::of(cse.kappa));
    for (Exp k = 0; k <= cse.kappa; ++k) {
      const BigInt carry = carried_exponent(cse.P, cse.t, k);
      for (const Word& sigma : stems_of_height(cse.P, k)) {
        const auto sh = stem_shift(cse.P, cse.t, sigma);
        CHECK(sh.stem == sigma);
        CHECK(sh.carry == carry);
      }
    }
    // beyond the depth at least one stem moves
    const Exp k = cse.kappa + 1;
    bool moved = false;
    for (const Word& sigma : stems_of_height(cse.P, k))
      if (stem_shift(cse.P, cse.t, sigma).stem != sigma) moved = true;
    CHECK(moved);
  }
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(Params(0, 3), DomainError);
  CHECK_THROWS_AS(Params(2, 0), DomainError);
}
