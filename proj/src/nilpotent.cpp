#include <map>
#include <mutex>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

namespace cayley {

  namespace {
    enum : Symbol { Zero = 0, One = 1, Plus = 2, Minus = 3 };

    AlphabetPtr coordinate_track() {
      static AlphabetPtr const t = Alphabet::make({"0", "1", "+", "-"});
      return t;
    }

    // Two's-complement digits, least significant first, then the sign.
    Word track_encode(BigInt const& x) {
      auto z = ZkNumber::from_rational(2, Rational(x));
      Word w(coordinate_track());
      for (int d : z.whole) {
        w.push_back(static_cast<Symbol>(d));
      }
      w.push_back(z.negative ? Minus : Plus);
      return w;
    }

    BigInt track_decode(Word const& w) {
      if (w.empty() || w[w.size() - 1] < Plus) {
        throw DomainError("coordinate track '" + w.str() + "' lacks a final sign");
      }
      ZkNumber z;
      z.k        = 2;
      z.negative = w[w.size() - 1] == Minus;
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] >= Plus) {
          throw DomainError("sign inside coordinate track '" + w.str() + "'");
        }
        z.whole.push_back(static_cast<int>(w[i]));
      }
      if (!z.whole.empty() && z.whole.back() == (z.negative ? 1 : 0)) {
        throw DomainError("redundant leading digit in '" + w.str() + "'");
      }
      return boost::multiprecision::numerator(z.value());
    }

    // Per track: no digit yet, last digit 0, last digit 1, finished.
    Dfa coordinate_language(AlphabetPtr const& sigma, int rank) {
      enum { Start, D0, D1, Done };
      std::size_t states = 1;
      for (int i = 0; i < rank; ++i) {
        states *= 4;
      }
      Dfa  d(sigma);
      auto part = [](std::size_t id, int i) { return static_cast<int>(id >> (2 * i) & 3u); };
      for (std::size_t id = 0; id < states; ++id) {
        bool all_done = true;
        for (int i = 0; i < rank; ++i) {
          all_done = all_done && part(id, i) == Done;
        }
        d.add_state(all_done);
      }
      d.set_start(0);
      for (std::size_t id = 0; id < states; ++id) {
        for (Symbol x = 0; x < sigma->size(); ++x) {
          if (!sigma->contains(x)) {
            continue;
          }
          auto        c  = sigma->components(x);
          std::size_t to = 0;
          bool        ok = true;
          for (int i = 0; i < rank && ok; ++i) {
            int s = part(id, i), n = -1;
            switch (c[static_cast<std::size_t>(i)]) {
              case kPad: n = s == Done ? Done : -1; break;
              case Zero: n = s == Done ? -1 : D0; break;
              case One: n = s == Done ? -1 : D1; break;
              case Plus: n = (s == Start || s == D1) ? Done : -1; break;
              case Minus: n = (s == Start || s == D0) ? Done : -1; break;
              default: break;
            }
            ok = n >= 0;
            to |= static_cast<std::size_t>(n) << (2 * i);
          }
          if (ok) {
            d.set_transition(static_cast<int>(id), x, static_cast<int>(to));
          }
        }
      }
      return d.minimized();
    }

    Monomial mono(long c, std::vector<int> powers) {
      return {Rational(c), std::move(powers)};
    }

    std::size_t bits(BigInt n) {
      std::size_t b = 0;
      while (n > 0) {
        n >>= 1;
        ++b;
      }
      return b;
    }
  }  // namespace

  BigInt evaluate(Polynomial const& p, std::vector<BigInt> const& x) {
    Rational sum = 0;
    for (auto const& m : p) {
      Rational t = m.coeff;
      for (std::size_t i = 0; i < m.powers.size(); ++i) {
        for (int e = 0; e < m.powers[i]; ++e) {
          t *= x[i];
        }
      }
      sum += t;
    }
    if (boost::multiprecision::denominator(sum) != 1) {
      throw DomainError("update polynomial is not integer-valued at this point");
    }
    return boost::multiprecision::numerator(sum);
  }

  AlphabetPtr nilpotent_alphabet(int rank) {
    if (rank < 1 || rank > 12) {
      throw UsageError("nilpotent rank must be between 1 and 12");
    }
    static std::mutex                 mu;
    static std::map<int, AlphabetPtr> cache;
    std::lock_guard                   lock(mu);
    auto&                             a = cache[rank];
    if (!a) {
      a = Alphabet::product(std::vector<AlphabetPtr>(static_cast<std::size_t>(rank),
                                                     coordinate_track()));
    }
    return a;
  }

  Word coordinates_encode(std::vector<BigInt> const& x, AlphabetPtr const& sigma) {
    std::vector<Word> tracks;
    for (auto const& v : x) {
      tracks.push_back(track_encode(v));
    }
    return interleave(sigma, tracks);
  }

  std::vector<BigInt> coordinates_decode(Word const& w, int rank) {
    auto tracks = split_tracks(w);
    if (static_cast<int>(tracks.size()) != rank) {
      throw DomainError("expected " + std::to_string(rank) + " coordinate tracks");
    }
    std::vector<BigInt> x;
    for (auto const& t : tracks) {
      x.push_back(track_decode(t));
    }
    return x;
  }

  NilpotentTable heisenberg_table() {
    NilpotentTable t;
    t.name       = "heisenberg";
    t.rank       = 3;
    t.generators = {"a", "b", "c"};
    auto x = [](long c) { return mono(c, {1, 0, 0}); };
    auto y = [](long c) { return mono(c, {0, 1, 0}); };
    auto z = [](long c) { return mono(c, {0, 0, 1}); };
    auto k = [](long c) { return mono(c, {0, 0, 0}); };
    t.updates = {
        {{x(1), k(1)}, {y(1)}, {z(1)}},
        {{x(1), k(-1)}, {y(1)}, {z(1)}},
        {{x(1)}, {y(1), k(1)}, {z(1), x(1)}},
        {{x(1)}, {y(1), k(-1)}, {z(1), x(-1)}},
        {{x(1)}, {y(1)}, {z(1), k(1)}},
        {{x(1)}, {y(1)}, {z(1), k(-1)}},
    };
    return t;
  }

  RepPtr nilpotent_rep(NilpotentTable table, OraclePtr oracle,
                       std::function<OracleElement(std::vector<BigInt> const&)> to_oracle) {
    int const rank = table.rank;
    if (table.updates.size() != 2 * table.generators.size()) {
      throw UsageError("update table needs one row per generator and inverse");
    }
    for (auto const& row : table.updates) {
      if (static_cast<int>(row.size()) != rank) {
        throw UsageError("update row has the wrong number of coordinates");
      }
      for (auto const& p : row) {
        for (auto const& m : p) {
          if (static_cast<int>(m.powers.size()) != rank) {
            throw UsageError("monomial has the wrong number of exponents");
          }
        }
      }
    }
    // Integer-valued on a grid, and s then s' is the identity there.
    {
      std::vector<BigInt> x(static_cast<std::size_t>(rank), -2);
      while (true) {
        for (std::size_t s = 0; s < table.updates.size(); ++s) {
          std::vector<BigInt> y, back;
          for (auto const& p : table.updates[s]) {
            y.push_back(evaluate(p, x));
          }
          for (auto const& p : table.updates[s ^ 1u]) {
            back.push_back(evaluate(p, y));
          }
          if (back != x) {
            throw UsageError("update for " + table.generators[s / 2] + (s % 2 ? "'" : "")
                             + " is not undone by its inverse");
          }
        }
        std::size_t i = 0;
        while (i < x.size() && x[i] == 2) {
          x[i++] = -2;
        }
        if (i == x.size()) {
          break;
        }
        ++x[i];
      }
    }

    auto rep      = std::make_shared<CayleyRep>();
    rep->name     = table.name;
    rep->sigma    = nilpotent_alphabet(rank);
    rep->identity = coordinates_encode(std::vector<BigInt>(static_cast<std::size_t>(rank), 0),
                                       rep->sigma);
    rep->gens     = GeneratorSet::from_names(table.generators);
    rep->language.cls = LanguageClass::REG;
    rep->language.dfa = coordinate_language(rep->sigma, rank);

    auto const sigma = rep->sigma;
    for (std::size_t s = 0; s < table.updates.size(); ++s) {
      auto const  row  = table.updates[s];
      std::uint64_t D  = 0;
      std::uint64_t dmax = 1;
      BigInt        coef = 1;
      for (auto const& p : row) {
        for (auto const& m : p) {
          std::uint64_t deg = 0;
          for (int e : m.powers) {
            deg += static_cast<std::uint64_t>(e);
          }
          D += deg + 1;
          dmax = std::max(dmax, deg);
          coef += abs(boost::multiprecision::numerator(m.coeff));
        }
      }
      std::uint64_t G = bits(coef) + 3;
      // Exact evaluation charged as schoolbook arithmetic: one pass per
      // operand and a quadratic term per monomial.
      auto fn = [row, rank, sigma, D](Word const& w, std::uint64_t& steps) {
        auto x = coordinates_decode(w, rank);
        std::vector<BigInt> y;
        for (auto const& p : row) {
          y.push_back(evaluate(p, x));
        }
        auto out = coordinates_encode(y, sigma);
        auto L   = static_cast<std::uint64_t>(w.size()) + 1;
        steps    = w.size() + out.size() + 2 + D * L * L;
        return out;
      };
      std::string name = table.generators[s / 2] + (s % 2 ? "'" : "");
      rep->multipliers.push_back(MultiplierFn::native(
          table.name + "-times-" + name, fn,
          TimeBudget::polynomial({G + 2 + D, 1 + dmax + 2 * D, D})));
    }
    rep->time_class = TimeClass::Polynomial;
    rep->oracle     = std::move(oracle);
    rep->decode     = [rank, to_oracle](Word const& w) {
      return to_oracle(coordinates_decode(w, rank));
    };
    rep->finalize();
    rep->validate();
    return rep;
  }

  RepPtr heisenberg_rep() {
    return nilpotent_rep(heisenberg_table(), heisenberg_oracle(), [](std::vector<BigInt> const& x) {
      return make_matrix(RatMatrix(3, {1, Rational(x[0]), Rational(x[2]), 0, 1, Rational(x[1]),
                                       0, 0, 1}));
    });
  }

}  // namespace cayley
