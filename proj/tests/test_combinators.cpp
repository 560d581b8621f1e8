#include <doctest.h>

#include "cayley/combinators.hpp"
#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

using namespace cayley;

namespace {
  std::string data(std::string const& f) {
    return std::string(CAYLEY_DATA_DIR) + "/" + f;
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

  void oracle_sound(RepPtr const& rep, int radius) {
    auto words = enumerate_normal_forms(rep, radius);
    CHECK(words.size() == bfs_ball(rep->oracle, radius).size());
    for (auto const& w : words) {
      auto g = rep->decode(w);
      for (Symbol s = 0; s < rep->gens.size(); ++s) {
        auto h = multiply_by_generator(*rep, w, s).first;
        REQUIRE(rep->language.check(h) != Membership::Out);
        REQUIRE(rep->decode(h) == rep->oracle->act(g, s));
      }
    }
  }
}  // namespace

TEST_CASE("direct product of two copies of Z") {
  auto z  = zn_rep(1);
  auto zz = direct_product(z, z);
  CHECK(zz->gens.symbols->names() == std::vector<std::string>{"a", "a'", "b", "b'"});
  CHECK(word_problem(*zz, generator_word(*zz, "a b a' b'")));
  CHECK(zz->identity.empty());
  auto nf = normal_form(*zz, generator_word(*zz, "a a b")).word;
  CHECK(nf.str() == "a.1 a.1 a.2");
  CHECK(zz->decode(nf) == make_pair(z->decode(Word::parse(z->sigma, "a a")),
                                    z->decode(Word::parse(z->sigma, "a"))));
  CHECK(zz->language.cls == LanguageClass::REG);
  oracle_sound(zz, 5);
  // Shifts of the suffix stay within K of the first factor.
  for (auto const& w : enumerate_normal_forms(zz, 4)) {
    for (Symbol s = 0; s < 2; ++s) {
      auto h = multiply_by_generator(*zz, w, s).first;
      auto d = h.size() > w.size() ? h.size() - w.size() : w.size() - h.size();
      REQUIRE(d <= *z->multipliers[s].k());
    }
  }
}

TEST_CASE("direct product with a non-regular factor") {
  auto l = lamplighter_rep();
  auto g = direct_product(l, zn_rep(1));
  CHECK(g->gens.symbols->names() == std::vector<std::string>{"a", "a'", "b", "c", "c'"});
  CHECK(g->language.cls == LanguageClass::ONE_COUNTER);
  CHECK(word_problem(*g, generator_word(*g, "a c b c' b a'")));
  oracle_sound(g, 3);
}

TEST_CASE("free product of two copies of Z") {
  auto z = zn_rep(1);
  auto f = free_product(z, z);
  CHECK_FALSE(word_problem(*f, generator_word(*f, "a b a' b'")));
  CHECK(word_problem(*f, generator_word(*f, "a b b' a'")));
  auto nf = normal_form(*f, generator_word(*f, "a a b a")).word;
  auto bl = free_product_blocks(*f, nf);
  REQUIRE(bl.size() == 3);
  CHECK(bl[0].first == 0);
  CHECK(bl[0].second.size() == 2);
  CHECK(bl[1].first == 1);
  CHECK(bl[2].second.size() == 1);
  oracle_sound(f, 5);
  CHECK(f->language.dfa->accepts(nf));
  CHECK_FALSE(f->language.dfa->accepts(Word::parse(f->sigma, "a.1 a'.1")));
}

TEST_CASE("free product normalizes a factor whose identity is not empty") {
  auto l = lamplighter_rep();
  auto f = free_product(l, zn_rep(1));
  CHECK(f->identity.empty());
  CHECK(word_problem(*f, generator_word(*f, "b c b c' ")) == false);
  CHECK(word_problem(*f, generator_word(*f, "b c c' b")));
  oracle_sound(f, 3);
}

TEST_CASE("finite extension: infinite dihedral group") {
  auto z = zn_rep(1);
  auto t = read_extension_table(*z, data("dihedral.json"));
  auto d = finite_extension(z, t);
  CHECK(word_problem(*d, generator_word(*d, "k k")));
  CHECK(word_problem(*d, generator_word(*d, "k a k a")));
  CHECK_FALSE(word_problem(*d, generator_word(*d, "k a")));
  CHECK(multiply_by_generator(*d, normal_form(*d, generator_word(*d, "a a")).word, d->gens.at("a"))
            .first.str()
        == "a a a");
  oracle_sound(d, 6);
  for (auto const& v : all_words(d->gens.symbols, 6)) {
    REQUIRE(word_problem(*d, v) == (evaluate_word(*t.oracle, Word(t.oracle->generators(), v.letters()))
                                    == t.oracle->identity()));
  }
  auto derived = read_extension_table(*z, data("dihedral_derived.json"));
  for (std::size_t k = 0; k < 2; ++k) {
    for (Symbol q = 0; q < 3; ++q) {
      CHECK(derived.rules[k][q].next == t.rules[k][q].next);
      CHECK(derived.rules[k][q].word == t.rules[k][q].word);
    }
  }
  auto bad = t;
  bad.rules[1][0].word = Word::parse(z->gens.symbols, "a");
  CHECK_THROWS_AS(validate_extension_table(*z, bad), UsageError);
}

TEST_CASE("subgroups") {
  auto z  = zn_rep(1);
  auto ev = subgroup(z, {{"c", "a a"}});
  CHECK(word_problem(*ev, generator_word(*ev, "c c'")));
  CHECK(ev->language.cls == LanguageClass::RE);
  CHECK(ev->language.check(Word::parse(z->sigma, "a a")) == Membership::In);
  CHECK(ev->language.check(Word::parse(z->sigma, "a a a a a a a a a a a")) == Membership::Unknown);
  CHECK(ev->language.check(Word::parse(z->sigma, "a a'")) == Membership::Out);
  auto f2 = free_product(z, z);
  auto s  = subgroup(f2, {{"x", "a a"}, {"y", "b b"}});
  CHECK_FALSE(word_problem(*s, generator_word(*s, "x y x' y'")));
  auto e1 = enumerate_normal_forms(s, 1);
  CHECK(e1.size() == 5);
  for (auto const& [name, word] : std::vector<std::pair<std::string, std::string>>{
           {"x", "a a"}, {"x'", "a' a'"}, {"y", "b b"}, {"y'", "b' b'"}}) {
    auto w = normal_form(*f2, generator_word(*f2, word)).word;
    CHECK(std::find(e1.begin(), e1.end(), w) != e1.end());
  }
  oracle_sound(s, 4);
  CHECK_THROWS_AS(subgroup(z, {{"c", "q"}}), UsageError);
}
