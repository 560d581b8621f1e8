#include "cayley/combinators.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <tuple>
#include <fstream>
#include <mutex>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

namespace cayley {

  namespace {
    constexpr std::size_t kMaxListedSymbols = 1u << 20;

    // Names of every code of a, including the unused all-padding code of a
    // product alphabet, so codes carry over unchanged.
    std::vector<std::string> code_names(Alphabet const& a) {
      if (!a.is_product()) {
        return a.names();
      }
      if (a.size() > kMaxListedSymbols) {
        throw UsageError("alphabet with " + std::to_string(a.size())
                         + " symbols is too large to combine");
      }
      std::vector<std::string> out;
      for (Symbol s = 0; s < a.size(); ++s) {
        out.push_back(a.contains(s) ? a.name(s) : "~unused");
      }
      return out;
    }

    AlphabetPtr tagged_union(Alphabet const& a, Alphabet const& b) {
      std::vector<std::string> names;
      for (auto const& n : code_names(a)) {
        names.push_back(n + ".1");
      }
      for (auto const& n : code_names(b)) {
        names.push_back(n + ".2");
      }
      return Alphabet::make(std::move(names));
    }

    Word lift(std::span<Symbol const> letters, AlphabetPtr const& sigma, Symbol offset) {
      Word w(sigma);
      w.letters().reserve(letters.size());
      for (auto x : letters) {
        w.letters().push_back(x + offset);
      }
      return w;
    }

    Word lower(std::span<Symbol const> letters, AlphabetPtr const& sigma, Symbol offset) {
      Word w(sigma);
      w.letters().reserve(letters.size());
      for (auto x : letters) {
        w.letters().push_back(x - offset);
      }
      return w;
    }

    std::vector<Symbol> shifted_codes(std::size_t n, Symbol offset) {
      std::vector<Symbol> m(n);
      for (std::size_t i = 0; i < n; ++i) {
        m[i] = static_cast<Symbol>(i) + offset;
      }
      return m;
    }

    std::string base_name(std::string const& n) {
      return !n.empty() && n.back() == '\'' ? n.substr(0, n.size() - 1) : n;
    }

    // S1 followed by S2, with clashing base names of S2 renamed to the next
    // letter unused by either factor.
    GeneratorSet joined_generators(GeneratorSet const& s1, GeneratorSet const& s2) {
      std::set<std::string> used;
      for (auto const* g : {&s1, &s2}) {
        for (Symbol s = 0; s < g->size(); ++s) {
          used.insert(base_name(g->symbols->name(s)));
        }
      }
      std::set<std::string> first;
      for (Symbol s = 0; s < s1.size(); ++s) {
        first.insert(base_name(s1.symbols->name(s)));
      }
      std::map<std::string, std::string> rename;
      char                               next = 'a';
      auto fresh = [&](std::string const& old) {
        while (next <= 'z' && used.count(std::string(1, next))) {
          ++next;
        }
        std::string n = next <= 'z' ? std::string(1, next++) : old + "2";
        used.insert(n);
        return n;
      };
      std::vector<std::string> names = s1.symbols->names();
      for (Symbol s = 0; s < s2.size(); ++s) {
        auto n = s2.symbols->name(s);
        auto b = base_name(n);
        if (first.count(b)) {
          if (!rename.count(b)) {
            rename[b] = fresh(b);
          }
          n = rename[b] + (n.size() > b.size() ? "'" : "");
        }
        names.push_back(n);
      }
      GeneratorSet g;
      g.symbols = Alphabet::make(std::move(names));
      g.inverse = s1.inverse;
      auto n1   = static_cast<Symbol>(s1.size());
      for (auto t : s2.inverse) {
        g.inverse.push_back(n1 + t);
      }
      return g;
    }

    LanguageClass weaker(LanguageClass a, LanguageClass b) {
      return static_cast<int>(a) > static_cast<int>(b) ? a : b;
    }

    Membership both(Membership a, Membership b) {
      if (a == Membership::Out || b == Membership::Out) {
        return Membership::Out;
      }
      if (a == Membership::Unknown || b == Membership::Unknown) {
        return Membership::Unknown;
      }
      return Membership::In;
    }

    TimeClass slower(TimeClass a, TimeClass b) {
      return a == TimeClass::Polynomial || b == TimeClass::Polynomial ? TimeClass::Polynomial
                                                                      : TimeClass::PfLinear;
    }

    // L(d) without the single word w.
    Dfa remove_word(Dfa const& d, Word const& w) {
      StateIndexer<std::pair<int, int>> idx;
      Dfa                               out(d.alphabet());
      std::vector<std::tuple<int, Symbol, int>> edges;
      idx.id({d.start(), 0});
      while (idx.pending()) {
        int  id      = idx.pop();
        auto [q, t]  = idx.state(id);
        for (Symbol x = 0; x < d.alphabet()->size(); ++x) {
          int r = d.next(q, x);
          if (r < 0) {
            continue;
          }
          int u = (t >= 0 && static_cast<std::size_t>(t) < w.size() && w[static_cast<std::size_t>(t)] == x)
                      ? t + 1
                      : -1;
          edges.emplace_back(id, x, idx.id({r, u}));
        }
      }
      for (std::size_t i = 0; i < idx.size(); ++i) {
        auto [q, t] = idx.state(static_cast<int>(i));
        out.add_state(d.accepting(q) && t != static_cast<int>(w.size()));
      }
      out.set_start(0);
      for (auto [from, x, to] : edges) {
        out.set_transition(from, x, to);
      }
      return out.minimized();
    }

    // Right multiplier of a factor after moving ψ^-1(e) to ε: the words ε
    // and u0 trade places.
    struct Normalized {
      RepPtr rep;

      Word swap(Word w) const {
        auto const& u0 = rep->identity;
        if (w.empty()) {
          return u0;
        }
        if (w == u0) {
          return Word(rep->sigma);
        }
        return w;
      }
      // Words of L' other than ε.
      Dfa block_language() const {
        auto const& d  = *rep->language.dfa;
        bool        has_empty = d.accepts(Word(rep->sigma));
        return remove_word(d, has_empty ? Word(rep->sigma) : rep->identity);
      }
    };

    int factor_of(Alphabet const& sigma, Symbol x) {
      auto n = sigma.name(x);
      return n.size() >= 2 && n.compare(n.size() - 2, 2, ".2") == 0 ? 1 : 0;
    }
  }  // namespace

  // ---- direct product ----

  RepPtr direct_product(RepPtr first, RepPtr second) {
    auto rep   = std::make_shared<CayleyRep>();
    rep->name  = "dp(" + first->name + "," + second->name + ")";
    rep->sigma = tagged_union(*first->sigma, *second->sigma);
    auto const n1    = static_cast<Symbol>(first->sigma->size());
    auto const sigma = rep->sigma;
    rep->identity    = lift(first->identity.letters(), sigma, 0)
                    + lift(second->identity.letters(), sigma, n1);
    rep->gens = joined_generators(first->gens, second->gens);

    // A word is u v with u over Σ1 and v over Σ2.
    auto split = [n1](Word const& w) {
      auto it = std::find_if(w.begin(), w.end(), [n1](Symbol x) { return x >= n1; });
      return static_cast<std::size_t>(it - w.begin());
    };
    if (first->language.dfa && second->language.dfa) {
      auto m1 = shifted_codes(first->sigma->size(), 0);
      auto m2 = shifted_codes(second->sigma->size(), n1);
      rep->language.cls = LanguageClass::REG;
      rep->language.dfa = concatenate_disjoint(first->language.dfa->relabel(sigma, m1),
                                               second->language.dfa->relabel(sigma, m2))
                              .minimized();
    } else {
      rep->language.cls    = weaker(first->language.cls, second->language.cls);
      rep->language.member = [first, second, split, n1](Word const& w) {
        auto        cut = split(w);
        auto const& x   = w.letters();
        if (std::any_of(x.begin() + static_cast<std::ptrdiff_t>(cut), x.end(),
                        [n1](Symbol s) { return s < n1; })) {
          return Membership::Out;
        }
        std::span<Symbol const> all(x);
        return both(first->language.check(Word(first->sigma, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cut)})),
                    second->language.check(lower(all.subspan(cut), second->sigma, n1)));
      };
    }

    for (Symbol s = 0; s < first->gens.size(); ++s) {
      auto const& inner = first->multipliers[s];
      auto        k     = inner.k();
      auto fn = [inner, split, sigma, first](Word const& w, std::uint64_t& steps) {
        auto                    cut = split(w);
        std::span<Symbol const> all(w.letters());
        auto r   = inner.apply(Word(first->sigma, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cut)}));
        auto out = lift(r.word.letters(), sigma, 0);
        for (std::size_t i = cut; i < w.size(); ++i) {
          out.letters().push_back(w[i]);
        }
        std::uint64_t delta = r.word.size() > cut ? r.word.size() - cut : cut - r.word.size();
        steps               = r.steps + (delta + 1) * (w.size() - cut) + 2;
        return out;
      };
      // The suffix moves by at most K cells, or by at most the inner step
      // count when K is unknown.
      auto budget = k ? TimeBudget::overhead(inner.budget(), 0, *k + 1, 2)
                      : TimeBudget::overhead(inner.budget(), 1, 1, 2);
      rep->multipliers.push_back(
          MultiplierFn::native("dp-left(" + inner.describe() + ")", fn, budget, k));
    }
    for (Symbol s = 0; s < second->gens.size(); ++s) {
      auto const& inner = second->multipliers[s];
      auto fn = [inner, split, sigma, second, n1](Word const& w, std::uint64_t& steps) {
        auto                    cut = split(w);
        std::span<Symbol const> all(w.letters());
        auto r   = inner.apply(lower(all.subspan(cut), second->sigma, n1));
        Word out(sigma, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cut)});
        out += lift(r.word.letters(), sigma, n1);
        steps = r.steps + cut + 2;
        return out;
      };
      rep->multipliers.push_back(MultiplierFn::native("dp-right(" + inner.describe() + ")", fn,
                                                      TimeBudget::overhead(inner.budget(), 0, 1, 2),
                                                      inner.k()));
    }
    rep->time_class = slower(first->time_class, second->time_class);
    if (rep->time_class == TimeClass::Polynomial && first->quasigeodesic_c
        && second->quasigeodesic_c) {
      rep->quasigeodesic_c = 2 * std::max(*first->quasigeodesic_c, *second->quasigeodesic_c);
    }
    rep->oracle = pair_oracle(first->oracle, second->oracle, rep->gens.symbols);
    rep->decode = [first, second, split, n1](Word const& w) {
      auto                    cut = split(w);
      std::span<Symbol const> all(w.letters());
      return make_pair(
          first->decode(Word(first->sigma, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cut)})),
          second->decode(lower(all.subspan(cut), second->sigma, n1)));
    };
    rep->finalize();
    rep->validate();
    return rep;
  }

  // ---- free product ----

  std::vector<std::pair<int, Word>> free_product_blocks(CayleyRep const& rep, Word const& w) {
    std::vector<std::pair<int, Word>> out;
    for (auto x : w) {
      int f = factor_of(*rep.sigma, x);
      if (out.empty() || out.back().first != f) {
        out.emplace_back(f, Word(rep.sigma));
      }
      out.back().second.push_back(x);
    }
    return out;
  }

  RepPtr free_product(RepPtr first, RepPtr second) {
    auto rep   = std::make_shared<CayleyRep>();
    rep->name  = "fp(" + first->name + "," + second->name + ")";
    rep->sigma = tagged_union(*first->sigma, *second->sigma);
    auto const n1    = static_cast<Symbol>(first->sigma->size());
    auto const sigma = rep->sigma;
    rep->identity    = Word(sigma);
    rep->gens        = joined_generators(first->gens, second->gens);
    std::array<Normalized, 2> const f{Normalized{first}, Normalized{second}};
    std::array<Symbol, 2> const     off{0, n1};

    // Maximal runs of one factor's symbols; adjacent blocks always differ.
    auto blocks = [n1](Word const& w) {
      std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> out;
      for (std::size_t i = 0; i < w.size(); ++i) {
        int b = w[i] < n1 ? 0 : 1;
        if (out.empty() || out.back().first != b) {
          out.push_back({b, {i, i}});
        }
        out.back().second.second = i + 1;
      }
      return out;
    };
    auto block_word = [f, off](Word const& w, int b, std::size_t lo, std::size_t hi) {
      std::span<Symbol const> all(w.letters());
      return lower(all.subspan(lo, hi - lo), f[static_cast<std::size_t>(b)].rep->sigma,
                   off[static_cast<std::size_t>(b)]);
    };

    if (first->language.dfa && second->language.dfa) {
      std::array<Dfa, 2> B{f[0].block_language().relabel(sigma, shifted_codes(first->sigma->size(), 0)),
                           f[1].block_language().relabel(sigma,
                                                         shifted_codes(second->sigma->size(), n1))};
      // State 0 is the empty word; then the states of each block automaton.
      Dfa  d(sigma);
      int  base[2] = {1, 1 + B[0].state_count()};
      d.add_state(true);
      for (int b = 0; b < 2; ++b) {
        for (int q = 0; q < B[b].state_count(); ++q) {
          d.add_state(B[b].accepting(q));
        }
      }
      d.set_start(0);
      for (int b = 0; b < 2; ++b) {
        auto lo = b == 0 ? Symbol{0} : n1;
        auto hi = b == 0 ? n1 : static_cast<Symbol>(sigma->size());
        for (Symbol x = lo; x < hi; ++x) {
          int entry = B[b].next(B[b].start(), x);
          if (entry >= 0) {
            d.set_transition(0, x, base[b] + entry);
            // Leaving a complete block of the other factor.
            auto const& o = B[1 - b];
            for (int q = 0; q < o.state_count(); ++q) {
              if (o.accepting(q)) {
                d.set_transition(base[1 - b] + q, x, base[b] + entry);
              }
            }
          }
          for (int q = 0; q < B[b].state_count(); ++q) {
            int r = B[b].next(q, x);
            if (r >= 0) {
              d.set_transition(base[b] + q, x, base[b] + r);
            }
          }
        }
      }
      rep->language.cls = LanguageClass::REG;
      rep->language.dfa = d.minimized();
    } else {
      rep->language.cls    = weaker(first->language.cls, second->language.cls);
      rep->language.member = [blocks, block_word, f](Word const& w) {
        Membership m = Membership::In;
        for (auto const& [b, range] : blocks(w)) {
          auto const& fac = f[static_cast<std::size_t>(b)];
          auto        u   = block_word(w, b, range.first, range.second);
          if (u.empty()) {
            return Membership::Out;
          }
          m = both(m, fac.rep->language.check(fac.swap(u)));
        }
        return m;
      };
    }

    for (int b = 0; b < 2; ++b) {
      auto const& fac = f[static_cast<std::size_t>(b)];
      for (Symbol s = 0; s < fac.rep->gens.size(); ++s) {
        auto const& inner = fac.rep->multipliers[s];
        auto const  o     = off[static_cast<std::size_t>(b)];
        auto fn = [inner, fac, blocks, block_word, sigma, b, o](Word const& w, std::uint64_t& steps) {
          auto bl  = blocks(w);
          Word out = w;
          Word cur(fac.rep->sigma);
          if (!bl.empty() && bl.back().first == b) {
            cur = block_word(w, b, bl.back().second.first, bl.back().second.second);
            out.letters().resize(bl.back().second.first);
          }
          auto r  = inner.apply(fac.swap(cur));
          auto nb = fac.swap(r.word);
          out += lift(nb.letters(), sigma, o);
          steps = r.steps + 2 * w.size() + 2 * fac.rep->identity.size() + 2;
          return out;
        };
        std::uint64_t u0     = fac.rep->identity.size();
        auto          budget = TimeBudget::composed({TimeBudget::pf_linear(2, 2 * u0 + 2), inner.budget()}, u0);
        std::optional<std::uint64_t> k;
        if (inner.k()) {
          k = *inner.k() + u0;
        }
        rep->multipliers.push_back(
            MultiplierFn::native("fp-block(" + inner.describe() + ")", fn, budget, k));
      }
    }
    rep->time_class = slower(first->time_class, second->time_class);
    if (rep->time_class == TimeClass::Polynomial && first->quasigeodesic_c
        && second->quasigeodesic_c) {
      rep->quasigeodesic_c
          = 2 * std::max(*first->quasigeodesic_c, *second->quasigeodesic_c)
            + static_cast<double>(std::max(first->identity.size(), second->identity.size()));
    }
    rep->oracle = free_product_oracle(first->oracle, second->oracle, rep->gens.symbols);
    rep->decode = [blocks, block_word, f](Word const& w) {
      std::vector<OracleElement> parts;
      std::vector<int>           labels;
      for (auto const& [b, range] : blocks(w)) {
        auto const& fac = f[static_cast<std::size_t>(b)];
        parts.push_back(fac.rep->decode(fac.swap(block_word(w, b, range.first, range.second))));
        labels.push_back(b);
      }
      return make_blocks(std::move(parts), std::move(labels));
    };
    rep->finalize();
    rep->validate();
    return rep;
  }

  // ---- finite extension ----

  AlphabetPtr extension_generators(CayleyRep const& h, FiniteExtensionTable const& table) {
    auto names = h.gens.symbols->names();
    for (auto const& [n, inv] : table.extra) {
      names.push_back(n);
      if (inv != n) {
        names.push_back(inv);
      }
    }
    return Alphabet::make(std::move(names));
  }

  namespace {
    void check_shape(CayleyRep const& h, FiniteExtensionTable const& table, std::size_t gens) {
      if (table.cosets.empty() || table.coset_words.size() != table.cosets.size()) {
        throw UsageError(table.name + ": one representative word per coset required");
      }
      if (table.rules.size() != table.cosets.size()) {
        throw UsageError(table.name + ": rule table incomplete");
      }
      for (auto const& row : table.rules) {
        if (row.size() != gens) {
          throw UsageError(table.name + ": rule table incomplete");
        }
        for (auto const& r : row) {
          if (r.next < 0 || static_cast<std::size_t>(r.next) >= table.cosets.size()) {
            throw UsageError(table.name + ": rule points to an unknown coset");
          }
          if (!same_alphabet(r.word.alphabet(), h.gens.symbols)) {
            throw UsageError(table.name + ": rule word not over the subgroup generators");
          }
        }
      }
    }

    OracleElement coset_element(GroupOracle const& g, AlphabetPtr const& sg, std::string const& w) {
      return evaluate_word(g, Word::parse(sg, w));
    }

    Word to_group_word(Word const& hw, AlphabetPtr const& sg) {
      return Word(sg, hw.letters());
    }
  }  // namespace

  void derive_extension_rules(CayleyRep const& h, FiniteExtensionTable& table, int bound) {
    if (!table.oracle) {
      throw UsageError(table.name + ": deriving rules needs an oracle for G");
    }
    auto sg = extension_generators(h, table);
    auto const& G = *table.oracle;
    std::vector<OracleElement> reps, inverses;
    for (auto const& w : table.coset_words) {
      reps.push_back(coset_element(G, sg, w));
      auto inv = G.inverse(reps.back());
      if (!inv) {
        throw UsageError(table.name + ": oracle cannot invert coset representatives");
      }
      inverses.push_back(*inv);
    }
    std::vector<Word> images;
    for (Symbol s = 0; s < h.gens.size(); ++s) {
      images.push_back(Word(sg, {s}));
    }
    CayleyBall ball(subgroup_oracle(table.oracle, h.gens.symbols, images));
    ball.grow_to(bound);
    table.rules.resize(table.cosets.size());
    for (std::size_t k = 0; k < table.cosets.size(); ++k) {
      auto& row = table.rules[k];
      if (row.size() == sg->size()) {
        continue;
      }
      row.clear();
      for (Symbol q = 0; q < sg->size(); ++q) {
        auto g     = G.act(reps[k], q);
        bool found = false;
        for (std::size_t j = 0; j < table.cosets.size() && !found; ++j) {
          auto target = G.multiply(g, inverses[j]);
          if (!target) {
            throw UsageError(table.name + ": oracle cannot multiply");
          }
          if (auto w = ball.geodesic(*target)) {
            row.push_back({Word(h.gens.symbols, w->letters()), static_cast<int>(j)});
            found = true;
          }
        }
        if (!found) {
          throw UsageError(table.name + ": no rule for " + table.cosets[k] + " * " + sg->name(q)
                           + " within length " + std::to_string(bound));
        }
      }
    }
  }

  void validate_extension_table(CayleyRep const& h, FiniteExtensionTable const& table) {
    auto sg = extension_generators(h, table);
    check_shape(h, table, sg->size());
    if (!table.coset_words[0].empty() && table.coset_words[0] != "eps") {
      throw UsageError(table.name + ": the first coset must be the trivial one");
    }
    for (Symbol q = 0; q < h.gens.size(); ++q) {
      auto const& r = table.rules[0][q];
      if (r.next != 0 || r.word.size() != 1 || r.word[0] != q) {
        throw UsageError(table.name + ": trivial coset row must fix subgroup generators");
      }
    }
    if (!table.oracle) {
      return;
    }
    auto const& G = *table.oracle;
    if (G.generators()->names() != sg->names()) {
      throw UsageError(table.name + ": oracle generators do not match S_G");
    }
    for (std::size_t k = 0; k < table.cosets.size(); ++k) {
      auto lhs0 = coset_element(G, sg, table.coset_words[k]);
      for (Symbol q = 0; q < sg->size(); ++q) {
        auto const& r   = table.rules[k][q];
        auto        lhs = G.act(lhs0, q);
        auto        rhs = evaluate_word(G, to_group_word(r.word, sg)
                                             + Word::parse(sg, table.coset_words[static_cast<std::size_t>(r.next)]));
        if (!(lhs == rhs)) {
          throw UsageError(table.name + ": rule " + table.cosets[k] + " * " + sg->name(q) + " = "
                           + r.word.str() + " " + table.cosets[static_cast<std::size_t>(r.next)]
                           + " fails in the oracle");
        }
      }
    }
  }

  FiniteExtensionTable read_extension_table(CayleyRep const& h, std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw UsageError("cannot open extension table '" + path + "'");
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(path + ": " + e.what(), e.byte);
    }
    FiniteExtensionTable t;
    int                  bound = 8;
    try {
      t.name = j.value("name", std::string("ext"));
      for (auto const& g : j.value("generators", nlohmann::json::array())) {
        auto n = g.at("name").get<std::string>();
        t.extra.emplace_back(n, g.value("inverseName", n + "'"));
      }
      for (auto const& c : j.at("cosets")) {
        t.cosets.push_back(c.at("name").get<std::string>());
        t.coset_words.push_back(c.value("word", std::string()));
      }
      bound = j.value("deriveBound", 8);
      auto sg = extension_generators(h, t);
      if (j.contains("matrices")) {
        std::vector<MatrixGenerator> mg;
        for (auto const& m : parse_matrix_spec(j.at("matrices"), path)) {
          mg.push_back({m.name, m.matrix, m.inverse_name == m.name ? "" : m.inverse_name.empty() ? m.name + "'" : m.inverse_name});
        }
        // Order the matrices like S_G.
        std::vector<MatrixGenerator> ordered;
        for (auto const& n : sg->names()) {
          auto it = std::find_if(mg.begin(), mg.end(), [&](auto const& m) { return m.name == n; });
          if (it != mg.end()) {
            ordered.push_back(*it);
          }
        }
        t.oracle = matrix_oracle(t.name + "-matrix", ordered);
      }
      if (j.contains("rules")) {
        std::vector<std::vector<std::optional<CosetRule>>> partial(
            t.cosets.size(), std::vector<std::optional<CosetRule>>(sg->size()));
        for (Symbol q = 0; q < h.gens.size(); ++q) {
          partial[0][q] = CosetRule{Word(h.gens.symbols, {q}), 0};
        }
        auto coset_index = [&](std::string const& n) {
          auto it = std::find(t.cosets.begin(), t.cosets.end(), n);
          if (it == t.cosets.end()) {
            throw UsageError(path + ": unknown coset '" + n + "'");
          }
          return static_cast<std::size_t>(it - t.cosets.begin());
        };
        for (auto const& r : j.at("rules")) {
          auto k = coset_index(r.at("coset").get<std::string>());
          auto q = sg->at(r.at("gen").get<std::string>());
          partial[k][q] = CosetRule{Word::parse(h.gens.symbols, r.value("word", std::string())),
                                    static_cast<int>(coset_index(r.at("next").get<std::string>()))};
        }
        bool complete = true;
        for (auto const& row : partial) {
          complete = complete && std::all_of(row.begin(), row.end(), [](auto const& r) { return r.has_value(); });
        }
        if (complete) {
          for (auto const& row : partial) {
            t.rules.emplace_back();
            for (auto const& r : row) {
              t.rules.back().push_back(*r);
            }
          }
        } else {
          // Keep complete rows; the rest is derived.
          for (auto const& row : partial) {
            t.rules.emplace_back();
            if (std::all_of(row.begin(), row.end(), [](auto const& r) { return r.has_value(); })) {
              for (auto const& r : row) {
                t.rules.back().push_back(*r);
              }
            }
          }
        }
      }
    } catch (nlohmann::json::exception const& e) {
      throw UsageError(path + ": " + e.what());
    }
    auto sg = extension_generators(h, t);
    bool complete = t.rules.size() == t.cosets.size()
                    && std::all_of(t.rules.begin(), t.rules.end(),
                                   [&](auto const& row) { return row.size() == sg->size(); });
    if (!complete) {
      derive_extension_rules(h, t, bound);
    }
    validate_extension_table(h, t);
    return t;
  }

  RepPtr finite_extension(RepPtr h, FiniteExtensionTable table) {
    auto sg = extension_generators(*h, table);
    if (table.rules.empty() || table.rules.size() != table.cosets.size()) {
      derive_extension_rules(*h, table, 8);
    }
    validate_extension_table(*h, table);

    auto rep   = std::make_shared<CayleyRep>();
    rep->name  = "ext(" + h->name + "," + table.name + ")";
    auto names = code_names(*h->sigma);
    auto const nh = static_cast<Symbol>(names.size());
    for (std::size_t i = 1; i < table.cosets.size(); ++i) {
      std::string n = "[" + table.cosets[i] + "]";
      while (std::find(names.begin(), names.end(), n) != names.end()) {
        n = "[" + n + "]";
      }
      names.push_back(n);
    }
    rep->sigma    = Alphabet::make(std::move(names));
    auto const sigma = rep->sigma;
    rep->identity = lift(h->identity.letters(), sigma, 0);
    rep->gens.symbols = sg;
    rep->gens.inverse = h->gens.inverse;
    for (auto const& [n, inv] : table.extra) {
      rep->gens.inverse.push_back(sg->at(inv));
      if (inv != n) {
        rep->gens.inverse.push_back(sg->at(n));
      }
    }

    // w σ_k with σ_0 = ε.
    auto split = [nh](Word const& w) {
      if (!w.empty() && w[w.size() - 1] >= nh) {
        return std::pair{static_cast<int>(w[w.size() - 1] - nh) + 1, w.size() - 1};
      }
      return std::pair{0, w.size()};
    };
    auto base = [h, split](Word const& w) {
      auto [k, n] = split(w);
      std::span<Symbol const> all(w.letters());
      return std::pair{k, Word(h->sigma, {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n)})};
    };

    if (h->language.dfa) {
      auto d   = h->language.dfa->relabel(sigma, shifted_codes(h->sigma->size(), 0));
      int  end = d.add_state(true);
      for (int q = 0; q < end; ++q) {
        if (d.accepting(q)) {
          for (Symbol c = nh; c < sigma->size(); ++c) {
            d.set_transition(q, c, end);
          }
        }
      }
      rep->language.cls = LanguageClass::REG;
      rep->language.dfa = d.minimized();
    } else {
      rep->language.cls    = h->language.cls;
      rep->language.member = [h, base, nh](Word const& w) {
        auto [k, u] = base(w);
        for (auto x : u) {
          if (x >= nh) {
            return Membership::Out;
          }
        }
        return h->language.check(u);
      };
    }

    auto const rules = table.rules;
    for (Symbol q = 0; q < sg->size(); ++q) {
      std::vector<TimeBudget>      parts{TimeBudget::pf_linear(2, 4)};
      std::optional<std::uint64_t> k = 0, growth = 0;
      for (auto const& row : rules) {
        std::uint64_t row_k = 1;
        for (auto s : row[q].word) {
          auto const& m = h->multipliers[s];
          parts.push_back(m.budget());
          if (m.k() && growth) {
            growth = std::max(*growth, *m.k());
            row_k += *m.k();
          } else {
            growth.reset();
          }
        }
        if (k) {
          k = std::max(*k, row_k);
        }
      }
      if (!growth) {
        k.reset();
      }
      auto fn = [h, rules, q, base, sigma, nh](Word const& w, std::uint64_t& steps) {
        auto [kk, u]     = base(w);
        auto const& rule = rules[static_cast<std::size_t>(kk)][q];
        steps            = 2 * w.size() + 4;
        for (auto s : rule.word) {
          auto r = h->multipliers[s].apply(u);
          u      = std::move(r.word);
          steps += r.steps;
        }
        auto out = lift(u.letters(), sigma, 0);
        if (rule.next > 0) {
          out.push_back(nh + static_cast<Symbol>(rule.next - 1));
        }
        return out;
      };
      rep->multipliers.push_back(MultiplierFn::native("ext-" + sg->name(q), fn,
                                                      TimeBudget::composed(parts, growth), k));
    }
    rep->time_class = h->time_class;
    rep->oracle     = coset_oracle(h->oracle, sg, table.cosets, table.rules);
    auto cosets     = table.cosets;
    rep->decode     = [h, base, cosets](Word const& w) {
      auto [k, u] = base(w);
      return make_coset(h->decode(u), k, cosets[static_cast<std::size_t>(k)]);
    };
    rep->finalize();
    rep->validate();
    return rep;
  }

  // ---- subgroups ----

  RepPtr subgroup(RepPtr rep, std::vector<std::pair<std::string, std::string>> const& gens,
                  std::optional<double> distortion) {
    auto c   = change_generators(rep, gens);
    auto out = std::make_shared<CayleyRep>(*c);
    out->name = "sub(" + rep->name + ")";
    struct Reach {
      std::once_flag                                     once;
      std::unordered_set<std::vector<Symbol>, WordHash>  words;
    };
    auto reach            = std::make_shared<Reach>();
    auto parent_language  = rep->language;
    out->language         = {};
    out->language.cls     = LanguageClass::RE;
    out->language.member  = [parent_language, reach, c](Word const& w) {
      if (parent_language.check(w) == Membership::Out) {
        return Membership::Out;
      }
      std::call_once(reach->once, [&] {
        for (auto const& u : enumerate_normal_forms(c, 4)) {
          reach->words.insert(u.letters());
        }
      });
      return reach->words.count(w.letters()) ? Membership::In : Membership::Unknown;
    };
    if (out->time_class == TimeClass::Polynomial && rep->quasigeodesic_c && distortion) {
      out->quasigeodesic_c = *rep->quasigeodesic_c * std::max(1.0, *distortion);
    }
    out->finalize();
    out->validate();
    return out;
  }

}  // namespace cayley
