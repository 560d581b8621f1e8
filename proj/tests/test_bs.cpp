#include <doctest.h>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

using namespace cayley;

namespace {
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

TEST_CASE("BS multiplication examples") {
  auto r12 = bs_rep(1, 2);
  auto r23 = bs_rep(2, 3);
  auto t   = r12->gens.at("t");
  CHECK(multiply_by_generator(*r12, normal_word(*r12, "a a"), t).first.str() == "t a");
  CHECK(multiply_by_generator(*r23, normal_word(*r23, "a"), t).first.str() == "a t");
  CHECK(multiply_by_generator(*r12, normal_word(*r12, "t a"), r12->gens.at("t'")).first.str()
        == "a a");
  CHECK(normal_form(*r12, generator_word(*r12, "a a t")).word.str() == "t a");
  CHECK(word_problem(*r12, generator_word(*r12, "t a t' a' a'")));
  CHECK_THROWS_AS(bs_rep(2, 2), UsageError);
  CHECK_THROWS_AS(normal_form(*r12, generator_word(*r12, "t"), {.strict = true}),
                  UnsupportedError);
  CHECK_FALSE(normal_form(*r12, generator_word(*r12, "t")).report.bounded);
}

TEST_CASE("BS defining relations are identities") {
  for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
    auto        rep = bs_rep(p, q);
    std::string v   = "t";
    for (int i = 0; i < p; ++i) {
      v += " a";
    }
    v += " t'";
    for (int i = 0; i < q; ++i) {
      v += " a'";
    }
    CHECK(word_problem(*rep, generator_word(*rep, v)));
  }
}

TEST_CASE("BS language matches the structural parser") {
  for (auto [p, q] : {std::pair{1, 2}, {2, 3}, {2, 5}}) {
    auto rep = bs_rep(p, q);
    for (auto const& w : all_words(rep->sigma, 7)) {
      bool parsed = true;
      try {
        (void)bs_parse(p, q, w);
      } catch (DomainError const&) {
        parsed = false;
      }
      REQUIRE(rep->language.dfa->accepts(w) == parsed);
    }
  }
}

TEST_CASE("BS multipliers keep normal forms and agree with the oracles") {
  for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
    auto rep   = bs_rep(p, q);
    auto words = enumerate_normal_forms(rep, 7);
    CHECK(words.size() == bfs_ball(rep->oracle, 7).size());
    for (auto const& w : words) {
      auto g = rep->decode(w);
      for (Symbol s = 0; s < rep->gens.size(); ++s) {
        auto h = multiply_by_generator(*rep, w, s).first;
        REQUIRE(rep->language.dfa->accepts(h));
        REQUIRE(bs_is_normal(bs_parse(p, q, h)));
        REQUIRE(rep->decode(h) == rep->oracle->act(g, s));
      }
    }
  }
  auto rep = bs_rep(1, 2);
  auto mat = bs_matrix_oracle(2);
  for (auto const& v : all_words(rep->gens.symbols, 6)) {
    auto nf = normal_form(*rep, v).word;
    REQUIRE(evaluate_word(*mat, Word(mat->generators(), nf.letters()))
            == evaluate_word(*mat, Word(mat->generators(), v.letters())));
  }
}
