#include <doctest.h>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"
#include "cayley/metrics.hpp"
#include "cayley/oracle.hpp"

using namespace cayley;

TEST_CASE("pi_alpha on the worked examples") {
  auto lamp  = lamplighter_rep();
  auto alpha = SymbolWeighting::natural(*lamp);
  auto g     = pi_alpha(alpha, normal_word(*lamp, "a # ↑ #"), *lamp->oracle);
  CHECK(g == make_lamp(LampEl{{}, 1}));
  CHECK(pi_alpha(alpha, Word(lamp->sigma), *lamp->oracle) == lamp->oracle->identity());

  auto bs = bs_rep(1, 2);
  auto o  = bs_matrix_oracle(2);
  auto h  = pi_alpha(SymbolWeighting::natural(*bs), normal_word(*bs, "t a"), *o);
  CHECK(h == evaluate_word(*o, "t a"));

  SymbolWeighting partial;
  partial.sigma = lamp->sigma;
  partial.images.assign(lamp->sigma->size(), std::nullopt);
  CHECK_THROWS_AS(pi_alpha(partial, normal_word(*lamp, "# ↑ #"), *lamp->oracle), UsageError);
  CHECK_THROWS_AS(SymbolWeighting::from_json(*lamp, nlohmann::json{{"a", "a"}}), UsageError);
}

TEST_CASE("lamplighter prefix enumeration matches brute force") {
  auto                     lamp = lamplighter_rep();
  std::size_t              pruned = 0, brute = 0;
  for_each_normal_form(*lamp, 8, [&](Word const& w) {
    CHECK(lamplighter_member(w));
    ++pruned;
  });
  std::vector<Symbol> x;
  std::function<void()> all = [&] {
    if (lamplighter_member(Word(lamp->sigma, x))) {
      ++brute;
    }
    if (x.size() == 8) {
      return;
    }
    for (Symbol s = 0; s < lamp->sigma->size(); ++s) {
      x.push_back(s);
      all();
      x.pop_back();
    }
  };
  all();
  CHECK(pruned == brute);
  CHECK(brute > 0);
}

TEST_CASE("distance function vanishes for the natural weightings") {
  auto lamp = lamplighter_rep();
  auto t    = h_function(*lamp, SymbolWeighting::natural(*lamp), lamp->oracle, 12);
  CHECK(t.first == 3);
  CHECK(t.h.size() == 10);
  CHECK(t.vanishes());

  for (auto [p, q] : {std::pair{1, 2}, {2, 3}}) {
    auto bs = bs_rep(p, q);
    auto u  = h_function(*bs, SymbolWeighting::natural(*bs), bs->oracle, 10);
    CHECK(u.first == 0);
    CHECK(u.h.size() == 11);
    CHECK(u.vanishes());
  }
}

TEST_CASE("perturbed weighting is detected") {
  auto lamp  = lamplighter_rep();
  auto alpha = SymbolWeighting::natural(*lamp);
  alpha.set(*lamp, "b", "a");
  auto t = h_function(*lamp, alpha, lamp->oracle, 6);
  REQUIRE(t.h.size() == 4);
  CHECK(t.h[0] == 0);
  CHECK(t.h[1] >= 1);
  CHECK(lamplighter_member(*t.witness));
  for (std::size_t i = 1; i < t.h.size(); ++i) {
    CHECK(t.h[i] >= t.h[i - 1]);
  }
}

TEST_CASE("quasigeodesic constants") {
  auto lamp = lamplighter_rep();
  auto r    = quasigeodesic_check(lamp, lamp->oracle, 6);
  CHECK(r.elements > 1);
  CHECK_FALSE(r.violation);
  CHECK(r.C <= *lamp->quasigeodesic_c);

  auto z = quasigeodesic_check(lamp, lamp->oracle, 0);
  CHECK(z.elements == 1);
  CHECK(z.C == doctest::Approx(3.0));
}

TEST_CASE("BS(1,2) conjugates have exponentially long normal forms") {
  auto bs = bs_rep(1, 2);
  auto gw = growth_witness(*bs, [&](int n) { return bs_conjugate_word(*bs, n); }, 14,
                           bs_matrix_oracle(2));
  REQUIRE(gw.size() == 15);
  for (auto const& p : gw) {
    CHECK(p.input_length == static_cast<std::size_t>(2 * p.n + 1));
    CHECK(p.nf_length == (std::size_t{1} << p.n));
  }
  CHECK(gw.back().ratio > 500);
}
