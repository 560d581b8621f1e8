#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

namespace cayley {

  namespace {
    enum : Symbol { A = 0, AI = 1, T = 2, TI = 3 };

    AlphabetPtr bs_alphabet() {
      static AlphabetPtr const sigma = Alphabet::make({"a", "a'", "t", "t'"});
      return sigma;
    }

    void check_params(int p, int q) {
      if (p < 1 || q <= p) {
        throw UsageError("BS(p,q) requires 1 <= p < q, got (" + std::to_string(p) + ","
                         + std::to_string(q) + ")");
      }
    }

    std::size_t tail_length(BigInt const& k) {
      return static_cast<std::size_t>(abs(k));
    }
  }  // namespace

  Word bs_render(BrittonForm const& f, AlphabetPtr const& sigma) {
    Word w(sigma);
    for (auto const& s : f.syllables) {
      for (long i = 0; i < s.a; ++i) {
        w.push_back(A);
      }
      w.push_back(s.eps > 0 ? T : TI);
    }
    Symbol      x = f.tail >= 0 ? A : AI;
    std::size_t n = tail_length(f.tail);
    w.letters().reserve(w.size() + n);
    for (std::size_t i = 0; i < n; ++i) {
      w.push_back(x);
    }
    return w;
  }

  bool bs_is_normal(BrittonForm const& f) {
    for (std::size_t i = 0; i < f.syllables.size(); ++i) {
      auto const& s     = f.syllables[i];
      long        bound = s.eps > 0 ? f.q : f.p;
      if (s.a < 0 || s.a >= bound || (s.eps != 1 && s.eps != -1)) {
        return false;
      }
      // w_i empty forces the same sign as the syllable to its left.
      if (s.a == 0 && i > 0 && f.syllables[i - 1].eps != s.eps) {
        return false;
      }
    }
    return true;
  }

  BrittonForm bs_parse(int p, int q, Word const& w) {
    check_params(p, q);
    BrittonForm f;
    f.p = p;
    f.q = q;
    long run = 0;
    bool neg = false;
    for (auto x : w) {
      switch (x) {
        case A:
          if (neg) {
            throw DomainError("mixed a and a' in '" + w.str() + "'");
          }
          ++run;
          break;
        case AI:
          if (run > 0) {
            throw DomainError("mixed a and a' in '" + w.str() + "'");
          }
          neg = true;
          --run;
          break;
        default:
          if (neg) {
            throw DomainError("a' before t in '" + w.str() + "'");
          }
          f.syllables.push_back({run, x == T ? 1 : -1});
          run = 0;
      }
    }
    f.tail = run;
    if (!bs_is_normal(f)) {
      throw DomainError("'" + w.str() + "' is not a BS(" + std::to_string(p) + ","
                        + std::to_string(q) + ") normal form");
    }
    return f;
  }

  BrittonForm bs_multiply(BrittonForm f, char gen, bool inverse) {
    BigInt const p = f.p, q = f.q;
    if (gen == 'a') {
      f.tail += inverse ? -1 : 1;
      return f;
    }
    if (!inverse) {
      BigInt m = floor_div(f.tail, q);
      BigInt r = f.tail - m * q;
      if (r != 0) {
        f.syllables.push_back({static_cast<long>(r), 1});
        f.tail = m * p;
      } else if (!f.syllables.empty() && f.syllables.back().eps == 1) {
        f.syllables.push_back({0, 1});
        f.tail = m * p;
      } else if (!f.syllables.empty()) {
        long w1 = f.syllables.back().a;
        f.syllables.pop_back();
        f.tail = m * p + w1;
      } else {
        f.syllables.push_back({0, 1});
        f.tail = m * p;
      }
      return f;
    }
    BigInt n = floor_div(f.tail, p);
    BigInt s = f.tail - n * p;
    if (s != 0) {
      f.syllables.push_back({static_cast<long>(s), -1});
      f.tail = n * q;
    } else if (!f.syllables.empty() && f.syllables.back().eps == 1) {
      long w1 = f.syllables.back().a;
      f.syllables.pop_back();
      f.tail = n * q + w1;
    } else if (!f.syllables.empty()) {
      f.syllables.push_back({0, -1});
      f.tail = n * q;
    } else {
      f.syllables.push_back({0, -1});
      f.tail = n * q;
    }
    return f;
  }

  Dfa bs_language(int p, int q, AlphabetPtr const& sigma) {
    check_params(p, q);
    // State (c, last): c a's since the last t (q marks "too many for a
    // syllable"), last in {none, +, -}; plus one state for a negative tail.
    Dfa  d(sigma);
    auto id = [q](int c, int last) { return last * (q + 1) + c; };
    for (int last = 0; last < 3; ++last) {
      for (int c = 0; c <= q; ++c) {
        d.add_state(true);
      }
    }
    int neg = d.add_state(true);
    d.set_start(id(0, 0));
    for (int last = 0; last < 3; ++last) {
      for (int c = 0; c <= q; ++c) {
        int from = id(c, last);
        d.set_transition(from, A, id(std::min(c + 1, q), last));
        if (c == 0) {
          d.set_transition(from, AI, neg);
        }
        if (c < q && (c > 0 || last != 2)) {
          d.set_transition(from, T, id(0, 1));
        }
        if (c < p && (c > 0 || last != 1)) {
          d.set_transition(from, TI, id(0, 2));
        }
      }
    }
    d.set_transition(neg, AI, neg);
    return d.minimized();
  }

  RepPtr bs_rep(int p, int q) {
    check_params(p, q);
    auto rep      = std::make_shared<CayleyRep>();
    rep->name     = "bs:" + std::to_string(p) + ":" + std::to_string(q);
    rep->sigma    = bs_alphabet();
    rep->identity = Word(rep->sigma);
    rep->gens     = GeneratorSet::from_names({"a", "t"});
    rep->language.cls = LanguageClass::REG;
    rep->language.dfa = bs_language(p, q, rep->sigma);
    auto const sigma  = rep->sigma;
    // A one-tape machine rewrites the tail a^{mq} into a^{mp} by repeated
    // block marking, so the charge is the two scans plus |tail_in| |tail_out|.
    for (auto [gen, inv] : {std::pair{'a', false}, {'a', true}, {'t', false}, {'t', true}}) {
      auto fn = [p, q, sigma, gen, inv](Word const& w, std::uint64_t& steps) {
        auto f   = bs_parse(p, q, w);
        auto g   = bs_multiply(f, gen, inv);
        auto out = bs_render(g, sigma);
        steps    = w.size() + out.size() + 2;
        if (gen == 't') {
          steps += tail_length(f.tail) * (tail_length(g.tail) + 1);
        }
        return out;
      };
      std::string name = std::string(1, gen) + (inv ? "'" : "");
      auto        c    = static_cast<std::uint64_t>(q);
      rep->multipliers.push_back(MultiplierFn::native(
          "bs-times-" + name, fn, TimeBudget::polynomial({4, 2 * c + 4, c + 1})));
    }
    rep->time_class = TimeClass::Polynomial;
    rep->oracle     = britton_oracle(p, q);
    rep->decode     = [p, q](Word const& w) { return make_britton(bs_parse(p, q, w)); };
    rep->finalize();
    rep->validate();
    return rep;
  }

}  // namespace cayley
