#include <doctest.h>

#include "cayley/errors.hpp"
#include "cayley/words.hpp"

using namespace cayley;

TEST_CASE("convolve pads the shorter track") {
  auto ab = Alphabet::make({"a", "b", "c"});
  auto u  = Word::parse(ab, "a b");
  auto v  = Word::parse(ab, "a");
  auto c  = convolve(u, v);
  CHECK(c.size() == 2);
  CHECK(c.str() == "(a,a) (b,_)");
  CHECK(convolve(Word(ab), Word(ab)).size() == 0);
  CHECK(convolve(v, Word::parse(ab, "a b c")).str() == "(a,a) (_,b) (_,c)");
}

TEST_CASE("deconvolve inverts convolve") {
  auto ab = Alphabet::make({"a", "b"});
  std::vector<Word> corpus{Word(ab)};
  for (int len = 1; len <= 4; ++len) {
    for (int m = 0; m < (1 << len); ++m) {
      Word w(ab);
      for (int i = 0; i < len; ++i) {
        w.push_back((m >> i) & 1);
      }
      corpus.push_back(w);
    }
  }
  for (auto const& u : corpus) {
    for (auto const& v : corpus) {
      auto c = convolve(u, v);
      CHECK(c.size() == std::max(u.size(), v.size()));
      auto [x, y] = c.deconvolve();
      CHECK(x == u);
      CHECK(y == v);
    }
  }
}

TEST_CASE("mixed alphabets are rejected") {
  auto a = Alphabet::make({"a"});
  auto b = Alphabet::make({"b"});
  CHECK_THROWS_AS(convolve(Word::parse(a, "a"), Word::parse(b, "b")), UsageError);
}

TEST_CASE("word text syntax") {
  auto ab = Alphabet::make({"a", "a'", "#"});
  CHECK(Word::parse(ab, "eps").empty());
  CHECK(Word::parse(ab, "").str() == "eps");
  CHECK(Word::parse(ab, "a a' #").str() == "a a' #");
  CHECK_THROWS_AS(Word::parse(ab, "a x"), UsageError);
  CHECK_THROWS_AS(Alphabet::make({"_"}), UsageError);
  CHECK_THROWS_AS(Alphabet::make({"a", "a"}), UsageError);
}

TEST_CASE("product alphabet names") {
  auto d = Alphabet::make({"0", "1"});
  auto p = Alphabet::product({d, d, d});
  auto s = p->at("(1,_,0)");
  CHECK(p->name(s) == "(1,_,0)");
  CHECK_FALSE(p->find("(_,_,_)"));
  CHECK(p->components(s) == std::vector<Symbol>{1, kPad, 0});
}
