#include <doctest.h>

#include <random>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

using namespace cayley;

namespace {
  Rational random_zk(std::mt19937_64& rng, int k) {
    std::uniform_int_distribution<long> num(-100000, 100000);
    std::uniform_int_distribution<int>  ell(0, 6);
    BigInt den = 1;
    for (int i = ell(rng); i > 0; --i) {
      den *= k;
    }
    return Rational(BigInt(num(rng)), den);
  }

  Word enc(int k, Rational const& r) {
    return zk_encode(k, r, zk_alphabet(k));
  }
}  // namespace

TEST_CASE("Z[1/k] encoding") {
  CHECK(enc(2, 0).str() == ". +");
  CHECK(enc(2, Rational(1, 2)).str() == "1 . +");
  CHECK(enc(2, Rational(-1, 2)).str() == "1 . -");
  CHECK(enc(2, -1).str() == ". -");
  CHECK(enc(10, 123).str() == ". 3 2 1 +");
  CHECK(enc(10, Rational(-1, 10)).str() == "9 . -");
  CHECK_THROWS_AS(enc(2, Rational(1, 3)), DomainError);
  CHECK_THROWS_AS(zk_decode(2, Word::parse(zk_alphabet(2), "0 1 . +")), DomainError);
  CHECK_THROWS_AS(zk_decode(2, Word::parse(zk_alphabet(2), ". 1 0 +")), DomainError);
  CHECK_THROWS_AS(zk_decode(2, Word::parse(zk_alphabet(2), ". 1 -")), DomainError);
  std::mt19937_64 rng(3);
  for (int k : {2, 3, 10}) {
    auto lang = zk_language(k, zk_alphabet(k));
    for (int i = 0; i < 3000; ++i) {
      auto r = random_zk(rng, k);
      auto w = enc(k, r);
      REQUIRE(zk_decode(k, w).value() == r);
      REQUIRE(lang.accepts(w));
    }
  }
}

TEST_CASE("Z[1/k] two-operand addition") {
  auto a = [](int k, Rational x, Rational y) {
    return zk_decode(k, zk_add(k, enc(k, x), enc(k, y))).value();
  };
  CHECK(a(2, Rational(1, 2), Rational(1, 2)) == 1);
  CHECK(a(2, Rational(3, 4), Rational(5, 8)) == Rational(11, 8));
  std::mt19937_64 rng(11);
  for (int k : {2, 3, 10}) {
    for (int i = 0; i < 3000; ++i) {
      auto x = random_zk(rng, k);
      auto y = random_zk(rng, k);
      REQUIRE(a(k, x, y) == x + y);
    }
  }
}

TEST_CASE("Z[1/k] generator transducers") {
  std::mt19937_64 rng(5);
  for (int k : {2, 3, 10}) {
    auto rep = zk_rep(k);
    std::vector<Rational> c{1, -1, Rational(1, k), Rational(-1, k)};
    for (int i = 0; i < 1500; ++i) {
      auto r = random_zk(rng, k);
      if (i < 40) {
        r = Rational(i - 20, k);
      }
      auto w = enc(k, r);
      for (Symbol s = 0; s < 4; ++s) {
        auto out = multiply_by_generator(*rep, w, s).first;
        REQUIRE(zk_decode(k, out).value() == r + c[s]);
      }
    }
    CHECK(word_problem(*rep, generator_word(*rep, "1 1/" + std::to_string(k) + "' 1'"))
          == false);
  }
  auto two = zk_rep(2);
  CHECK(word_problem(*two, generator_word(*two, "1/2 1/2 1'")));
  CHECK(zk_decode(2, zk_scale(2, Rational(3, 2), enc(2, Rational(1, 2)))).value()
        == Rational(3, 4));
}

TEST_CASE("Z^n transducers") {
  auto z2 = zn_rep(2);
  auto v  = [&](std::string_view s) { return generator_word(*z2, s); };
  CHECK(normal_form(*z2, v("b a a b' b'")).word.str() == "a a b'");
  CHECK(word_problem(*z2, v("a b a' b'")));
  CHECK_FALSE(word_problem(*z2, v("a b a'")));
  for (auto const& w : enumerate_normal_forms(z2, 5)) {
    auto g = z2->decode(w);
    for (Symbol s = 0; s < 4; ++s) {
      REQUIRE(z2->decode(multiply_by_generator(*z2, w, s).first) == z2->oracle->act(g, s));
    }
  }
  CHECK(enumerate_normal_forms(z2, 4).size() == bfs_ball(z2->oracle, 4).size());
}
