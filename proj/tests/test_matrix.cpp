#include <doctest.h>

#include <random>

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
}  // namespace

TEST_CASE("common base of generator entries") {
  CHECK(common_base({RatMatrix(2, {1, 1, 0, 1})}) == 1);
  CHECK(common_base({RatMatrix(2, {2, 0, 0, 1}), RatMatrix(2, {Rational(1, 2), 0, 0, 1})}) == 2);
  CHECK(common_base({RatMatrix(1, {Rational(5, 12)})}) == 6);
}

TEST_CASE("SL(2,Z) matrix representation") {
  auto rep = matrix_rep("sl2z", read_matrix_file(data("sl2z.json")));
  CHECK(word_problem(*rep, generator_word(*rep, "x x'")));
  CHECK_FALSE(word_problem(*rep, generator_word(*rep, "x y")));
  // (x y' x)^4 = 1 in SL(2,Z): x y' x is the order-4 rotation.
  CHECK(word_problem(*rep, generator_word(*rep, "x y' x x y' x x y' x x y' x")));
  CHECK(rep->language.check(rep->identity) == Membership::In);
  auto id = matrix_encode(RatMatrix::identity(2), 1, rep->sigma);
  CHECK(matrix_decode(id, 1) == RatMatrix::identity(2));
  CHECK_THROWS_AS(matrix_rep("bad", {{"s", RatMatrix(2, {1, 2, 2, 4}), ""}}), DomainError);
}

TEST_CASE("matrix multipliers agree with exact products") {
  auto rep = matrix_rep("bs12", read_matrix_file(data("bs12.json")));
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Symbol> gen(0, 3);
  Word       w = rep->identity;
  RatMatrix  m = RatMatrix::identity(2);
  RatMatrix const a(2, {1, 1, 0, 1}), t(2, {2, 0, 0, 1});
  std::vector<RatMatrix> g{a, a.inverse(), t, t.inverse()};
  for (int i = 0; i < 1000; ++i) {
    if (i % 40 == 0) {
      w = rep->identity;
      m = RatMatrix::identity(2);
    }
    auto s = gen(rng);
    w      = multiply_by_generator(*rep, w, s).first;
    m      = m * g[s];
    REQUIRE(matrix_decode(w, 2) == m);
    REQUIRE(matrix_encode(m, 2, rep->sigma) == w);
  }
}

TEST_CASE("BS(1,2) matrix rep agrees with the Britton rep") {
  auto mat = matrix_rep("bs12", read_matrix_file(data("bs12.json")));
  auto bs  = bs_rep(1, 2);
  for (auto const& v : all_words(bs->gens.symbols, 6)) {
    Word u(mat->gens.symbols, v.letters());
    REQUIRE(word_problem(*mat, u) == word_problem(*bs, v));
  }
}

TEST_CASE("Heisenberg coordinates") {
  auto rep = heisenberg_rep();
  auto enc = [&](long x, long y, long z) {
    return coordinates_encode({BigInt(x), BigInt(y), BigInt(z)}, rep->sigma);
  };
  auto b = rep->gens.at("b");
  CHECK(multiply_by_generator(*rep, enc(2, 3, 5), b).first == enc(2, 4, 7));
  CHECK(multiply_by_generator(*rep, rep->identity, rep->gens.at("a")).first == enc(1, 0, 0));
  CHECK(normal_form(*rep, generator_word(*rep, "a b a' b'")).word == enc(0, 0, 1));
  CHECK(word_problem(*rep, generator_word(*rep, "a b a' b' c'")));
  CHECK_FALSE(normal_form(*rep, generator_word(*rep, "a b")).report.bounded);
  CHECK_THROWS_AS(normal_form(*rep, generator_word(*rep, "a"), {true}), UnsupportedError);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> c(-1'000'000, 1'000'000);
  for (int i = 0; i < 2000; ++i) {
    std::vector<BigInt> x{c(rng), c(rng), c(rng)};
    auto w = coordinates_encode(x, rep->sigma);
    REQUIRE(rep->language.check(w) == Membership::In);
    REQUIRE(coordinates_decode(w, 3) == x);
    for (Symbol s = 0; s < 6; ++s) {
      auto h = multiply_by_generator(*rep, w, s).first;
      REQUIRE(rep->decode(h) == rep->oracle->act(rep->decode(w), s));
    }
  }
  CHECK(enumerate_normal_forms(rep, 3).size() == bfs_ball(rep->oracle, 3).size());
}

TEST_CASE("coordinate language is the encode image") {
  auto sigma = nilpotent_alphabet(1);
  auto table = heisenberg_table();
  table.rank = 1;
  table.generators = {"a"};
  table.updates    = {table.updates[0], table.updates[1]};
  for (auto& row : table.updates) {
    row.resize(1);
    for (auto& m : row[0]) {
      m.powers.resize(1);
    }
  }
  auto z  = nilpotent_rep(table, zn_rep(1)->oracle, [](std::vector<BigInt> const& x) {
    return make_matrix(RatMatrix(2, {1, Rational(x[0]), 0, 1}));
  });
  auto lang = z->language;
  auto one   = Alphabet::make({"0", "1", "+", "-"});
  std::size_t members = 0;
  for (auto const& t : all_words(one, 7)) {
    Word w = interleave(sigma, {t});
    bool ok = true;
    try {
      auto x = coordinates_decode(w, 1);
      REQUIRE(coordinates_encode(x, sigma) == w);
    } catch (DomainError const&) {
      ok = false;
    }
    REQUIRE((lang.check(w) == Membership::In) == ok);
    members += ok;
  }
  // 0 and -1 have no digits; j digits give 2^(j-1) values of each sign.
  CHECK(members == 2 + 2 * (1 + 2 + 4 + 8 + 16 + 32));
  CHECK(word_problem(*z, generator_word(*z, "a a a' a'")));
}

TEST_CASE("self-inverse matrix generators") {
  auto k = nlohmann::json::parse(R"({"n":2,"generators":[
      {"name":"k","entries":[[-1,0],[0,1]],"inverseName":"k"},
      {"name":"x","entries":[[1,1],[0,1]]}]})");
  auto rep = matrix_rep("kx", parse_matrix_spec(k, "inline"));
  CHECK(rep->gens.size() == 3);
  CHECK(word_problem(*rep, generator_word(*rep, "k k")));
  CHECK(word_problem(*rep, generator_word(*rep, "k x k x")));
  CHECK_FALSE(word_problem(*rep, generator_word(*rep, "k x")));
  auto bad = nlohmann::json::parse(R"({"n":2,"generators":[
      {"name":"x","entries":[[1,1],[0,1]],"inverseName":"x"}]})");
  CHECK_THROWS_AS(matrix_rep("bad", parse_matrix_spec(bad, "inline")), UsageError);
}
