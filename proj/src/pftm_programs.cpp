#include "cayley/errors.hpp"
#include "cayley/pftm.hpp"

namespace cayley {

  ShippedProgram append_x_program() {
    auto      sigma = Alphabet::make({"a", "b", "x"});
    PfBuilder b("append-x", sigma);
    b.rule("start", "BOX+", "BOX+", Move::R, "scan");
    for (auto const* s : {"a", "b", "x"}) {
      b.rule("scan", s, s, Move::R, "scan");
    }
    b.rule("scan", "BOX.", "x", Move::S, "accept");
    return {b.build("start", "accept"), TimeBudget::pf_linear(1, 2)};
  }

  ShippedProgram unary_times_a(AlphabetPtr const& alphabet, bool inverse) {
    if (alphabet->size() != 2) {
      throw UsageError("unary multiplier expects the alphabet {a, a'}");
    }
    auto g = alphabet->name(inverse ? 1 : 0);
    auto h = alphabet->name(inverse ? 0 : 1);
    // append g, or cancel a trailing h
    PfBuilder b(inverse ? "unary-times-inverse" : "unary-times", alphabet);
    b.rule("start", "BOX+", "BOX+", Move::R, "scan");
    b.rule("scan", g, g, Move::R, "scan");
    b.rule("scan", h, h, Move::R, "scan");
    b.rule("scan", "BOX.", "BOX.", Move::L, "back");
    b.rule("back", "BOX+", "BOX+", Move::R, "put");
    b.rule("back", g, g, Move::R, "put");
    b.rule("back", h, "BOX.", Move::S, "accept");
    b.rule("put", "BOX.", g, Move::S, "accept");
    return {b.build("start", "accept"), TimeBudget::pf_linear(1, 4)};
  }

  ShippedProgram lamplighter_times_b(AlphabetPtr const& alphabet) {
    for (auto const* s : {"b", "a", "a'", "↑", "#"}) {
      if (!alphabet->find(s)) {
        throw UsageError("lamplighter program expects the alphabet {b, a, a', ↑, #}");
      }
    }
    std::vector<std::string> const sigma{"b", "a", "a'", "↑", "#"};
    std::vector<std::string>       cells = sigma;
    cells.emplace_back("BOX.");
    // Toggle the lamp under the lamplighter: insert b before ↑, or delete the
    // b that precedes it by shifting the remainder one cell left.
    PfBuilder b("lamplighter-times-b", alphabet);
    b.rule("start", "BOX+", "BOX+", Move::R, "scan");
    for (auto const* s : {"a", "a'", "#"}) {
      b.rule("scan", s, s, Move::R, "scan");
      b.rule("scan-b", s, s, Move::R, "scan");
    }
    b.rule("scan", "b", "b", Move::R, "scan-b");
    b.rule("scan-b", "b", "b", Move::R, "scan-b");
    b.rule("scan", "↑", "b", Move::R, "carry ↑");
    for (auto const& c : sigma) {
      for (auto const& s : sigma) {
        b.rule("carry " + c, s, c, Move::R, "carry " + s);
      }
      b.rule("carry " + c, "BOX.", c, Move::S, "accept");
    }
    b.rule("scan-b", "↑", "↑", Move::L, "put ↑");
    for (auto const& s : cells) {
      if (s == "BOX.") {
        for (auto const& y : sigma) {
          b.rule("put " + s, y, s, Move::S, "accept");
        }
        continue;
      }
      for (auto const& y : sigma) {
        b.rule("put " + s, y, s, Move::R, "adv");
      }
      b.rule("fetch", s, s, Move::L, "put " + s);
    }
    b.rule("fetch", "BOX.", "BOX.", Move::L, "put BOX.");
    for (auto const& y : sigma) {
      b.rule("adv", y, y, Move::R, "fetch");
    }
    return {b.build("start", "accept"), TimeBudget::pf_linear(4, 8)};
  }

}  // namespace cayley
