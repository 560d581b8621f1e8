#include <doctest.h>

#include <random>

#include "cayley/errors.hpp"
#include "cayley/pftm.hpp"

using namespace cayley;

namespace {
  AlphabetPtr lamp_sigma() {
    static auto a = Alphabet::make({"b", "a", "a'", "↑", "#"});
    return a;
  }
}  // namespace

TEST_CASE("append-x") {
  auto [prog, budget] = append_x_program();
  CHECK(check_position_faithful(prog).faithful);
  auto r = run(prog, Word::parse(prog.alphabet(), "a a"), budget);
  CHECK(r.output.str() == "a a x");
  CHECK(r.steps == 4);
  CHECK(run(prog, Word(prog.alphabet()), budget).output.str() == "x");
  auto again = run(prog, Word::parse(prog.alphabet(), "a a"), budget);
  CHECK(again.steps == r.steps);
}

TEST_CASE("moving left off the marker is a faithfulness error") {
  auto      sigma = Alphabet::make({"a"});
  PfBuilder b("bad", sigma);
  b.rule("s", "BOX+", "BOX+", Move::L, "t");
  auto prog = b.build("s", "t");
  auto v    = check_position_faithful(prog);
  CHECK_FALSE(v.faithful);
  CHECK(v.offending.size() == 1);
  CHECK_THROWS_AS(run(prog, Word(sigma), TimeBudget::pf_linear(1, 1)), FaithfulnessError);
}

TEST_CASE("overwriting the marker is rejected") {
  auto      sigma = Alphabet::make({"a"});
  PfBuilder b("bad", sigma);
  b.rule("s", "BOX+", "a", Move::R, "t");
  auto prog = b.build("s", "t");
  CHECK_FALSE(check_position_faithful(prog).faithful);
  CHECK_THROWS_AS(run(prog, Word(sigma), TimeBudget::pf_linear(1, 1)), FaithfulnessError);
}

TEST_CASE("budget overrun") {
  auto [prog, budget] = append_x_program();
  (void)budget;
  CHECK_THROWS_AS(run(prog, Word::parse(prog.alphabet(), "a a a"), TimeBudget::pf_linear(1, 0)),
                  BudgetExceeded);
}

TEST_CASE("unary multipliers") {
  auto sigma = Alphabet::make({"a", "a'"});
  auto up    = unary_times_a(sigma, false);
  auto down  = unary_times_a(sigma, true);
  CHECK(run(up.program, Word::parse(sigma, "a a"), up.budget).output.str() == "a a a");
  CHECK(run(up.program, Word::parse(sigma, "a' a'"), up.budget).output.str() == "a'");
  CHECK(run(up.program, Word(sigma), up.budget).output.str() == "a");
  CHECK(run(down.program, Word::parse(sigma, "a"), down.budget).output.str() == "eps");
  CHECK(run(down.program, Word(sigma), down.budget).output.str() == "a'");
}

TEST_CASE("lamplighter times b program") {
  auto p = lamplighter_times_b(lamp_sigma());
  CHECK(check_position_faithful(p.program).faithful);
  auto in = Word::parse(lamp_sigma(), "a' # b a b a ↑ a b # a'");
  CHECK(run(p.program, in, p.budget).output.str() == "a' # b a b a b ↑ a b # a'");
  auto lit = Word::parse(lamp_sigma(), "# b ↑ a b #");
  CHECK(run(p.program, lit, p.budget).output.str() == "# ↑ a b #");
  CHECK(run(p.program, Word::parse(lamp_sigma(), "# ↑ #"), p.budget).output.str() == "# b ↑ #");
}

TEST_CASE("program json round trip and linear step bound") {
  auto p    = lamplighter_times_b(lamp_sigma());
  auto back = program_from_json(program_to_json(p.program));
  CHECK(back.rules().size() == p.program.rules().size());
  std::mt19937 rng(7);
  for (int len = 0; len <= 200; ++len) {
    Word w(lamp_sigma());
    w.push_back(lamp_sigma()->at("#"));
    for (int i = 0; i < len; ++i) {
      w.push_back(lamp_sigma()->at(rng() % 2 ? "a" : "b"));
    }
    w.push_back(lamp_sigma()->at(rng() % 2 ? "↑" : "a"));
    w.push_back(lamp_sigma()->at("#"));
    try {
      auto r = run(back, w, p.budget);
      CHECK(r.steps <= 4 * w.size() + 8);
    } catch (DomainError const&) {
    }
  }
}

TEST_CASE("time budgets") {
  auto lin = TimeBudget::pf_linear(3, 5);
  CHECK(lin(10) == 35);
  CHECK(TimeBudget::quadratic(2)(10) == 200);
  CHECK(TimeBudget::polynomial({1, 0, 1})(3) == 10);
  auto comp = TimeBudget::composed({lin, lin}, 2);
  CHECK(comp(10) == 35 + 41);
  CHECK(comp.linear_constants() == std::pair<std::uint64_t, std::uint64_t>{6, 16});
  for (std::uint64_t n = 0; n < 50; ++n) {
    CHECK(comp(n) <= comp(n + 1));
    CHECK(comp(n) == 6 * n + 16);
  }
}
