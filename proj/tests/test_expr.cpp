#include <doctest.h>

#include "cayley/checks.hpp"
#include "cayley/errors.hpp"
#include "cayley/expr.hpp"
#include "cayley/groups.hpp"

using namespace cayley;

namespace {
  std::size_t error_at(std::string_view text) {
    try {
      parse_group(text, default_expr_options());
    } catch (ParseError const& e) {
      return e.position();
    }
    return std::string_view::npos;
  }
}  // namespace

TEST_CASE("group expressions elaborate") {
  auto o = default_expr_options();
  CHECK(parse_group("lamplighter", o)->name == lamplighter_rep()->name);
  CHECK(parse_group("bs:1:2", o)->name == "bs:1:2");
  CHECK(parse_group(" heisenberg ", o)->gens.size() == 6);
  CHECK(parse_group("zk:3", o)->gens.size() == 4);
  CHECK(parse_group("matrix:sl2z.json", o)->gens.size() == 4);

  auto dp = parse_group("dp(zn:1, zn:1)", o);
  CHECK(dp->gens.symbols->names() == std::vector<std::string>{"a", "a'", "b", "b'"});
  CHECK(word_problem(*dp, generator_word(*dp, "a b a' b'")));

  auto sub = parse_group("sub(fp(zn:1,zn:1), x=aa, y=bb)", o);
  CHECK(sub->gens.size() == 4);
  CHECK(word_problem(*sub, generator_word(*sub, "x y x' y'")) == false);
  CHECK(word_problem(*sub, generator_word(*sub, "x y y' x'")));

  auto ext = parse_group("ext(zn:1, dihedral.json)", o);
  CHECK(word_problem(*ext, generator_word(*ext, "k a k a")));
}

TEST_CASE("group expression errors carry positions") {
  CHECK(error_at("bs:1") == 0);
  CHECK(error_at("nosuch") == 0);
  CHECK(error_at("dp(zn:1 zn:1)") == 8);
  CHECK(error_at("bs:1:x") == 5);
  CHECK(error_at("zn:1)") == 4);
  CHECK(error_at("sub(zn:1, x=q)") == 12);
  CHECK(error_at("matrix:missing.json") == 7);
  CHECK(error_at("bs:2:1") == 0);
}

TEST_CASE("loose word parsing") {
  auto a = Alphabet::make({"a", "a'", "b"});
  CHECK(parse_word_loose(a, "aa'b").str() == "a a' b");
  CHECK(parse_word_loose(a, "a a' b").str() == "a a' b");
  CHECK(parse_word_loose(a, "eps").empty());
  CHECK_THROWS_AS(parse_word_loose(a, "ac"), ParseError);
}

TEST_CASE("invariant suite passes on shipped groups") {
  for (auto const* e : {"lamplighter", "bs:1:2", "zk:2", "heisenberg", "dp(zn:1, zn:1)"}) {
    CAPTURE(e);
    CheckOptions opt;
    opt.radius  = 4;
    opt.samples = 20;
    for (auto const& r : run_checks(parse_group(e, default_expr_options()), opt)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed());
      CHECK((r.checked > 0 || r.name == "bounded difference"));
    }
  }
}
