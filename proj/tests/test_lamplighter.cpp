#include <doctest.h>

#include <random>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

using namespace cayley;

namespace {
  Word nf(std::string_view s) {
    return Word::parse(lamplighter_alphabet(), s);
  }

  std::vector<Word> all_words(AlphabetPtr const& a, std::size_t max_len) {
    std::vector<Word> out{Word(a)};
    std::size_t       from = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::size_t to = out.size();
      for (std::size_t i = from; i < to; ++i) {
        for (Symbol s = 0; s < a->size(); ++s) {
          Word w = out[i];
          w.push_back(s);
          out.push_back(std::move(w));
        }
      }
      from = to;
    }
    return out;
  }
}  // namespace

TEST_CASE("lamplighter encoding of the worked examples") {
  CHECK(lamplighter_encode(LampEl{{-1, 0, 2}, 1}).str() == "a' # b a b a ↑ a b # a'");
  CHECK(lamplighter_encode(LampEl{{-2}, 1}).str() == "a' a' # b a a a ↑ #");
  CHECK(lamplighter_encode(LampEl{}).str() == "# ↑ #");
  CHECK(lamplighter_encode(LampEl{{3}, 5}).str() == "a a a # b a a ↑ #");
}

TEST_CASE("lamplighter decode inverts encode") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> pos(-12, 12);
  std::uniform_int_distribution<int>  cnt(0, 12);
  for (int t = 0; t < 10000; ++t) {
    LampEl g;
    g.z = pos(rng);
    for (int i = cnt(rng); i > 0; --i) {
      g.lit.insert(pos(rng));
    }
    auto back = lamplighter_decode(lamplighter_encode(g));
    REQUIRE(back.lit == g.lit);
    REQUIRE(back.z == g.z);
  }
}

TEST_CASE("lamplighter membership is exactly the image of encode") {
  auto words = all_words(lamplighter_alphabet(), 8);
  std::size_t members = 0;
  for (auto const& w : words) {
    bool in = lamplighter_member(w);
    if (in) {
      ++members;
      REQUIRE(lamplighter_encode(lamplighter_decode(w)) == w);
    }
  }
  // Every element whose encoding has length <= 8 is found.
  std::size_t expected = 0;
  for (long z = -8; z <= 8; ++z) {
    for (long lo = -8; lo <= 8; ++lo) {
      for (long hi = lo; hi <= lo + 8; ++hi) {
        for (unsigned mask = 0; mask < (1u << (hi - lo + 1)); ++mask) {
          LampEl g;
          g.z = z;
          for (long i = lo; i <= hi; ++i) {
            if (mask >> (i - lo) & 1) {
              g.lit.insert(i);
            }
          }
          if (!g.lit.empty() && (*g.lit.begin() != lo || *g.lit.rbegin() != hi)) {
            continue;
          }
          if (g.lit.empty() && lo != hi) {
            continue;
          }
          if (g.lit.empty() && lo != z) {
            continue;
          }
          if (lamplighter_encode(g).size() <= 8) {
            ++expected;
          }
        }
      }
    }
  }
  CHECK(members == expected);
}

TEST_CASE("lamplighter multipliers") {
  auto rep = lamplighter_rep();
  auto a   = rep->gens.at("a");
  auto b   = rep->gens.at("b");
  CHECK(multiply_by_generator(*rep, nf("# ↑ #"), a).first.str() == "a # ↑ #");
  CHECK(multiply_by_generator(*rep, nf("# ↑ #"), b).first.str() == "# b ↑ #");
  CHECK(multiply_by_generator(*rep, nf("a' # b a b a ↑ a b # a'"), b).first
        == lamplighter_encode(LampEl{{-1, 0, 1, 2}, 1}));
  CHECK_THROWS_AS(multiply_by_generator(*rep, nf("# #"), a), MembershipError);
}

TEST_CASE("lamplighter normal forms and word problem") {
  auto rep = lamplighter_rep();
  auto v   = [&](std::string_view s) { return generator_word(*rep, s); };
  CHECK(normal_form(*rep, v("b")).word.str() == "# b ↑ #");
  CHECK(normal_form(*rep, v("a a' b b")).word.str() == "# ↑ #");
  CHECK(normal_form(*rep, v("")).word.str() == "# ↑ #");
  CHECK(word_problem(*rep, v("b a b a' b a b a'")));
  CHECK_FALSE(word_problem(*rep, v("a b")));
}

TEST_CASE("lamplighter multipliers agree with the oracle on the radius-6 ball") {
  for (bool tm : {false, true}) {
    auto rep   = lamplighter_rep(tm);
    auto words = enumerate_normal_forms(rep, 6);
    auto ball  = bfs_ball(rep->oracle, 6);
    CHECK(words.size() == ball.size());
    for (auto const& w : words) {
      auto g = rep->decode(w);
      for (Symbol s = 0; s < rep->gens.size(); ++s) {
        auto h = multiply_by_generator(*rep, w, s).first;
        REQUIRE(lamplighter_member(h));
        REQUIRE(rep->decode(h) == rep->oracle->act(g, s));
      }
    }
  }
}

TEST_CASE("enumeration at small radius") {
  auto rep = lamplighter_rep();
  auto e0  = enumerate_normal_forms(rep, 0);
  REQUIRE(e0.size() == 1);
  CHECK(e0[0].str() == "# ↑ #");
  std::vector<std::string> e1;
  for (auto const& w : enumerate_normal_forms(rep, 1)) {
    e1.push_back(w.str());
  }
  CHECK(e1 == std::vector<std::string>{"# ↑ #", "a # ↑ #", "a' # ↑ #", "# b ↑ #"});
}

TEST_CASE("generator change on the lamplighter") {
  auto rep = lamplighter_rep();
  auto c   = change_generators(rep, {{"c", "a b"}});
  CHECK(normal_form(*c, generator_word(*c, "c")).word
        == normal_form(*rep, generator_word(*rep, "a b")).word);
  auto d = change_generators(rep, {{"d", "a"}});
  for (auto const& w : enumerate_normal_forms(rep, 4)) {
    CHECK(multiply_by_generator(*d, w, d->gens.at("d")).first
          == multiply_by_generator(*rep, w, rep->gens.at("a")).first);
  }
  auto cc = change_generators(rep, {{"c", "a b"}, {"c'", "b a'"}});
  CHECK(word_problem(*cc, generator_word(*cc, "c c'")));
  CHECK_THROWS_AS(change_generators(rep, {{"c", "a z"}}), UsageError);
}
