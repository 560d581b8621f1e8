#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "cayley/metrics.hpp"
#include "cayley/oracle.hpp"

namespace cayley {

  namespace {
    // Shortest accepted completion from each state.
    std::vector<int> distance_to_accept(Dfa const& d) {
      auto const         n = static_cast<std::size_t>(d.state_count());
      auto const&        sigma = d.alphabet();
      std::vector<std::vector<int>> back(n);
      for (int q = 0; q < d.state_count(); ++q) {
        for (Symbol x = 0; x < sigma->size(); ++x) {
          if (!sigma->contains(x)) {
            continue;
          }
          int r = d.next(q, x);
          if (r >= 0) {
            back[static_cast<std::size_t>(r)].push_back(q);
          }
        }
      }
      std::vector<int> dist(n, std::numeric_limits<int>::max());
      std::deque<int>  todo;
      for (int q = 0; q < d.state_count(); ++q) {
        if (d.accepting(q)) {
          dist[static_cast<std::size_t>(q)] = 0;
          todo.push_back(q);
        }
      }
      while (!todo.empty()) {
        int q = todo.front();
        todo.pop_front();
        for (int p : back[static_cast<std::size_t>(q)]) {
          auto& dp = dist[static_cast<std::size_t>(p)];
          if (dp == std::numeric_limits<int>::max()) {
            dp = dist[static_cast<std::size_t>(q)] + 1;
            todo.push_back(p);
          }
        }
      }
      return dist;
    }

    std::vector<Symbol> codes(AlphabetPtr const& sigma) {
      std::vector<Symbol> out;
      for (Symbol x = 0; x < sigma->size(); ++x) {
        if (sigma->contains(x)) {
          out.push_back(x);
        }
      }
      return out;
    }

    // Oracle generator word to the same names over S.
    Word rename(Word const& v, AlphabetPtr const& target) {
      Word out(target);
      for (Symbol s : v) {
        out.push_back(target->at(v.alphabet()->name(s)));
      }
      return out;
    }
  }  // namespace

  Word const& SymbolWeighting::image(Symbol x) const {
    if (x >= images.size() || !images[x]) {
      throw UsageError("α has no image for symbol '" + sigma->name(x) + "'");
    }
    return *images[x];
  }

  void SymbolWeighting::set(CayleyRep const& rep, std::string const& symbol, std::string_view word) {
    auto x = rep.sigma->find(symbol);
    if (!x) {
      throw UsageError("α names unknown symbol '" + symbol + "'");
    }
    images[*x] = generator_word(rep, word);
  }

  SymbolWeighting SymbolWeighting::natural(CayleyRep const& rep) {
    SymbolWeighting a;
    a.sigma = rep.sigma;
    a.images.assign(rep.sigma->size(), std::nullopt);
    for (Symbol x : codes(rep.sigma)) {
      auto name = rep.sigma->name(x);
      if (name == "↑" || name == "#") {
        a.images[x] = Word(rep.gens.symbols);
      } else if (auto s = rep.gens.symbols->find(name)) {
        a.images[x] = Word(rep.gens.symbols, {*s});
      } else {
        throw UsageError("no natural image for symbol '" + name + "' of " + rep.name);
      }
    }
    return a;
  }

  SymbolWeighting SymbolWeighting::from_json(CayleyRep const& rep, nlohmann::json const& j,
                                             std::string const& origin) {
    if (!j.is_object()) {
      throw UsageError(origin + ": α must be a JSON object of symbol -> word");
    }
    SymbolWeighting a;
    a.sigma = rep.sigma;
    a.images.assign(rep.sigma->size(), std::nullopt);
    for (auto const& [k, v] : j.items()) {
      if (!v.is_string()) {
        throw UsageError(origin + ": image of '" + k + "' must be a string");
      }
      a.set(rep, k, v.get<std::string>());
    }
    for (Symbol x : codes(rep.sigma)) {
      if (!a.images[x]) {
        throw UsageError(origin + ": symbol '" + rep.sigma->name(x) + "' missing from α");
      }
    }
    return a;
  }

  SymbolWeighting SymbolWeighting::load(CayleyRep const& rep, std::string const& path) {
    if (path == "paper") {
      return natural(rep);
    }
    std::ifstream in(path);
    if (!in) {
      throw UsageError("cannot open α file '" + path + "'");
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(path + ": " + e.what(), e.byte);
    }
    return from_json(rep, j, path);
  }

  OracleElement pi_alpha(SymbolWeighting const& alpha, Word const& w, GroupOracle const& o) {
    auto g = o.identity();
    auto const& s = o.generators();
    for (Symbol x : w) {
      auto const& img = alpha.image(x);
      for (Symbol y : img) {
        g = o.act(g, s->at(img.alphabet()->name(y)));
      }
    }
    return g;
  }

  bool DistanceTable::vanishes() const {
    return std::all_of(h.begin(), h.end(), [](int v) { return v == 0; });
  }

  std::string DistanceTable::tsv() const {
    std::ostringstream out;
    out << "n\th\n";
    for (std::size_t i = 0; i < h.size(); ++i) {
      out << first + static_cast<int>(i) << '\t' << h[i] << '\n';
    }
    return out.str();
  }

  nlohmann::json DistanceTable::summary() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < h.size(); ++i) {
      rows.push_back({{"n", first + static_cast<int>(i)}, {"h", h[i]}});
    }
    return {{"vanishes", vanishes()}, {"maxN", max_n}, {"N", first}, {"words", words},
            {"rows", rows}};
  }

  void for_each_normal_form(CayleyRep const& rep, int max_n,
                            std::function<void(Word const&)> const& visit,
                            DistanceOptions const& opt) {
    auto const  letters = codes(rep.sigma);
    std::size_t seen    = 0;
    auto        count   = [&] {
      if (++seen > opt.word_cap) {
        throw CapExceeded("more than " + std::to_string(opt.word_cap) + " words of length <= "
                          + std::to_string(max_n));
      }
    };
    Word w(rep.sigma);
    auto& buf = w.letters();

    if (rep.language.dfa) {
      Dfa const& d    = *rep.language.dfa;
      auto const dist = distance_to_accept(d);
      std::function<void(int)> walk = [&](int q) {
        if (d.accepting(q)) {
          count();
          visit(w);
        }
        for (Symbol x : letters) {
          int r = d.next(q, x);
          if (r < 0 || static_cast<long>(buf.size()) + 1 + dist[static_cast<std::size_t>(r)] > max_n) {
            continue;
          }
          buf.push_back(x);
          walk(r);
          buf.pop_back();
        }
      };
      if (d.start() >= 0 && dist[static_cast<std::size_t>(d.start())] <= max_n) {
        walk(d.start());
      }
      return;
    }

    if (rep.language.viable_prefix) {
      std::function<void()> walk = [&] {
        if (rep.language.check(w) == Membership::In) {
          count();
          visit(w);
        }
        if (static_cast<int>(buf.size()) == max_n) {
          return;
        }
        for (Symbol x : letters) {
          buf.push_back(x);
          if (rep.language.viable_prefix(w)) {
            walk();
          }
          buf.pop_back();
        }
      };
      walk();
      return;
    }

    // Undecidable language: the image of the enumerator.
    auto shared = std::make_shared<CayleyRep const>(rep);
    NormalFormEnumerator e(shared, opt.radius.value_or(max_n));
    while (auto v = e.next()) {
      if (static_cast<int>(v->size()) <= max_n) {
        count();
        visit(*v);
      }
    }
  }

  DistanceTable h_function(CayleyRep const& rep, SymbolWeighting const& alpha, OraclePtr oracle,
                           int max_n, DistanceOptions const& opt) {
    if (max_n < 0) {
      throw UsageError("maxN must be nonnegative");
    }
    if (!rep.decode) {
      throw UnsupportedError(rep.name + " has no decoding into an oracle");
    }
    CayleyBall       ball(oracle, opt.ball_cap);
    std::vector<int> by_length(static_cast<std::size_t>(max_n) + 1, -1);
    std::vector<std::optional<Word>> best(by_length.size());
    int              unresolved = max_n + 1;
    std::string      reason;
    std::size_t      words = 0;

    for_each_normal_form(rep, max_n, [&](Word const& w) {
      auto const len = static_cast<int>(w.size());
      ++words;
      if (len >= unresolved) {
        return;
      }
      std::optional<int> d;
      try {
        d = word_distance(ball, pi_alpha(alpha, w, *oracle), rep.decode(w), opt.max_distance);
        if (!d) {
          reason = "distance beyond " + std::to_string(opt.max_distance) + " for '" + w.str() + "'";
        }
      } catch (CapExceeded const& e) {
        reason = e.what();
      }
      if (!d) {
        unresolved = len;
        return;
      }
      auto& slot = by_length[static_cast<std::size_t>(len)];
      if (*d > slot) {
        slot                                   = *d;
        best[static_cast<std::size_t>(len)] = w;
      }
    }, opt);

    DistanceTable t;
    t.max_n = max_n;
    t.words = words;
    t.first = 0;
    while (t.first <= max_n && by_length[static_cast<std::size_t>(t.first)] < 0) {
      ++t.first;
    }
    int run = 0;
    for (int n = t.first; n <= max_n && n < unresolved; ++n) {
      auto i = static_cast<std::size_t>(n);
      if (by_length[i] >= run && best[i]) {
        run       = by_length[i];
        t.witness = best[i];
      }
      t.h.push_back(run);
    }
    for (std::size_t i = 1; i < t.h.size(); ++i) {
      if (t.h[i] < t.h[i - 1]) {
        throw std::logic_error("distance table is not nondecreasing");
      }
    }
    if (unresolved <= max_n) {
      throw PartialTableError("distance table resolved only below n = " + std::to_string(unresolved)
                                  + ": " + reason,
                              t);
    }
    return t;
  }

  QuasigeodesicReport quasigeodesic_check(RepPtr rep, OraclePtr oracle, int radius,
                                          std::size_t cap) {
    CayleyBall ball(oracle, cap);
    ball.grow_to(radius);
    QuasigeodesicReport r;
    r.radius   = radius;
    r.elements = ball.size();
    std::optional<double> declared = rep->quasigeodesic_c;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      int  d  = ball.depth(i);
      auto v  = rename(*ball.geodesic(ball.elements()[i]), rep->gens.symbols);
      auto nf = normal_form(*rep, v).word;
      double ratio = static_cast<double>(nf.size()) / (d + 1);
      if (!r.worst || ratio > r.C) {
        r.C     = ratio;
        r.worst = QuasigeodesicReport::Point{nf, v, d};
      }
      if (declared && !r.violation && static_cast<double>(nf.size()) > *declared * (d + 1)) {
        r.violation = QuasigeodesicReport::Point{nf, v, d};
      }
    }
    return r;
  }

  std::vector<GrowthPoint> growth_witness(CayleyRep const& rep, std::function<Word(int)> const& family,
                                          int max_n, OraclePtr cross_check) {
    std::vector<GrowthPoint> out;
    std::optional<SymbolWeighting> alpha;
    if (cross_check) {
      alpha = SymbolWeighting::natural(rep);
    }
    for (int n = 0; n <= max_n; ++n) {
      auto v  = family(n);
      auto nf = normal_form(rep, v).word;
      if (cross_check) {
        auto lhs = evaluate_word(*cross_check, v.str());
        auto rhs = pi_alpha(*alpha, nf, *cross_check);
        if (!(lhs == rhs)) {
          throw std::logic_error("normal form of '" + v.str() + "' disagrees with "
                                 + cross_check->name());
        }
      }
      out.push_back({n, v.size(), nf.size(),
                     static_cast<double>(nf.size()) / static_cast<double>(v.size() + 1)});
    }
    return out;
  }

  Word bs_conjugate_word(CayleyRep const& rep, int n) {
    auto const& s = rep.gens.symbols;
    Word        v(s);
    for (int i = 0; i < n; ++i) {
      v.push_back(s->at("t"));
    }
    v.push_back(s->at("a"));
    for (int i = 0; i < n; ++i) {
      v.push_back(s->at("t'"));
    }
    return v;
  }

}  // namespace cayley
