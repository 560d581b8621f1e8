#include <doctest.h>

#include <random>

#include "cayley/errors.hpp"
#include "cayley/oracle.hpp"

using namespace cayley;

namespace {
  Word random_word(AlphabetPtr const& a, std::size_t len, std::mt19937& rng) {
    Word w(a);
    for (std::size_t i = 0; i < len; ++i) {
      w.push_back(static_cast<Symbol>(rng() % a->size()));
    }
    return w;
  }

  template <class F>
  void for_all_words(AlphabetPtr const& a, std::size_t len, F&& f) {
    Word w(a);
    std::vector<Symbol> digits(len, 0);
    for (;;) {
      f(Word(a, digits));
      std::size_t i = 0;
      while (i < len && ++digits[i] == a->size()) {
        digits[i++] = 0;
      }
      if (i == len) {
        return;
      }
    }
  }
}  // namespace

TEST_CASE("lamplighter oracle") {
  auto o = lamplighter_oracle();
  auto g = evaluate_word(*o, "b a b");
  CHECK(std::get<LampEl>(g.value).lit == std::set<long>{0, 1});
  CHECK(std::get<LampEl>(g.value).z == 1);
  CHECK(evaluate_word(*o, "") == o->identity());
}

TEST_CASE("bs matrix oracle relation") {
  auto o = bs_matrix_oracle(2);
  CHECK(evaluate_word(*o, "t a t'").key == "[[1,2],[0,1]]");
  CHECK(evaluate_word(*o, "t a t'") == evaluate_word(*o, "a a"));
}

TEST_CASE("britton reduce examples") {
  auto g = Alphabet::make({"a", "a'", "t", "t'"});
  CHECK(britton_str(britton_reduce(1, 2, Word::parse(g, "t a t'"))) == "a^2");
  CHECK(britton_str(britton_reduce(2, 3, Word::parse(g, "t a a t'"))) == "a^3");
  CHECK(britton_str(britton_reduce(2, 3, Word::parse(g, "t a t'"))) == "t a^1 t'");
  CHECK_THROWS_AS(britton_reduce(2, 2, Word(g)), UsageError);
}

TEST_CASE("britton reduction is confluent") {
  auto g = Alphabet::make({"a", "a'", "t", "t'"});
  for (auto [p, q] : {std::pair{1, 2}, std::pair{2, 3}}) {
    std::size_t mismatches = 0;
    for (std::size_t len = 0; len <= 10; ++len) {
      for_all_words(g, len, [&](Word const& v) {
        auto l = britton_str(britton_reduce(p, q, v, PinchOrder::Leftmost));
        auto r = britton_str(britton_reduce(p, q, v, PinchOrder::Rightmost));
        mismatches += l != r;
      });
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("britton oracle agrees with britton_reduce") {
  auto o = britton_oracle(2, 3);
  std::mt19937 rng(3);
  for (int i = 0; i < 2000; ++i) {
    auto v = random_word(o->generators(), rng() % 14, rng);
    CHECK(evaluate_word(*o, v).key == britton_str(britton_reduce(2, 3, v)));
  }
}

TEST_CASE("generator then inverse is the identity map, and folds associate") {
  std::vector<OraclePtr> oracles{lamplighter_oracle(), bs_matrix_oracle(2), heisenberg_oracle(),
                                 britton_oracle(2, 3), free_oracle({"a", "b"})};
  auto z  = free_oracle({"a"});
  auto zz = pair_oracle(z, z, Alphabet::make({"a", "a'", "b", "b'"}));
  oracles.push_back(zz);
  oracles.push_back(free_product_oracle(z, z, Alphabet::make({"a", "a'", "b", "b'"})));
  std::mt19937 rng(11);
  for (auto const& o : oracles) {
    auto gens = o->generators();
    for (int i = 0; i < 1000; ++i) {
      auto g = evaluate_word(*o, random_word(gens, rng() % 12, rng));
      auto s = static_cast<Symbol>(rng() % gens->size());
      CHECK(o->act(o->act(g, s), o->inverse_of(s)) == g);
    }
    for (int i = 0; i < 300; ++i) {
      auto u = random_word(gens, rng() % 10, rng);
      auto v = random_word(gens, rng() % 10, rng);
      auto m = o->multiply(evaluate_word(*o, u), evaluate_word(*o, v));
      REQUIRE(m);
      CHECK(*m == evaluate_word(*o, u + v));
      auto inv = o->inverse(evaluate_word(*o, u));
      REQUIRE(inv);
      CHECK(*o->multiply(*inv, evaluate_word(*o, u)) == o->identity());
    }
  }
}

TEST_CASE("bfs ball") {
  auto o = lamplighter_oracle();
  CHECK(bfs_ball(o, 0).size() == 1);
  auto b1 = bfs_ball(o, 1);
  CHECK(b1.size() == 4);
  auto b = bfs_ball(o, 5);
  LampEl two;
  two.lit = {0, 1};
  CHECK(b.distance(make_lamp(two)) == 4);
  auto geo = b.geodesic(make_lamp(two));
  REQUIRE(geo);
  CHECK(geo->size() == 4);
  CHECK(evaluate_word(*o, *geo) == make_lamp(two));
  CHECK_THROWS_AS(bfs_ball(o, 6, 100), CapExceeded);
  CHECK(b1.tsv().find("lit={} z=1\t1") != std::string::npos);
}

TEST_CASE("word distance satisfies the triangle inequality") {
  auto         o = lamplighter_oracle();
  CayleyBall   ball(o);
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto x = evaluate_word(*o, random_word(o->generators(), rng() % 5, rng));
    auto y = evaluate_word(*o, random_word(o->generators(), rng() % 5, rng));
    auto z = evaluate_word(*o, random_word(o->generators(), rng() % 5, rng));
    auto xy = word_distance(ball, x, y, 12);
    auto yz = word_distance(ball, y, z, 12);
    auto xz = word_distance(ball, x, z, 12);
    REQUIRE((xy && yz && xz));
    CHECK(*xz <= *xy + *yz);
  }
}

TEST_CASE("coset and subgroup oracles") {
  auto z  = free_oracle({"a"});
  auto zg = z->generators();
  // D_inf: cosets e, k; generators a, a', k
  auto gens = Alphabet::make({"a", "a'", "k"});
  std::vector<std::vector<CosetRule>> rules{
      {{Word::parse(zg, "a"), 0}, {Word::parse(zg, "a'"), 0}, {Word(zg), 1}},
      {{Word::parse(zg, "a'"), 1}, {Word::parse(zg, "a"), 1}, {Word(zg), 0}}};
  auto d = coset_oracle(z, gens, {"e", "k"}, rules);
  CHECK(evaluate_word(*d, "k a k a") == d->identity());
  CHECK_FALSE(evaluate_word(*d, "k a") == d->identity());
  CHECK(d->inverse_of(2) == 2);
  auto f2  = free_oracle({"a", "b"});
  auto sg  = Alphabet::make({"x", "x'", "y", "y'"});
  auto sub = subgroup_oracle(f2, sg,
                             {Word::parse(f2->generators(), "a a"), Word::parse(f2->generators(), "a' a'"),
                              Word::parse(f2->generators(), "b b"), Word::parse(f2->generators(), "b' b'")});
  CHECK_FALSE(evaluate_word(*sub, "x y x' y'") == sub->identity());
  CHECK(evaluate_word(*sub, "x y y' x'") == sub->identity());
}
