#include <algorithm>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

namespace cayley {

  namespace {
    enum : Symbol { B = 0, A = 1, I = 2, U = 3, H = 4 };
    constexpr int kNone = -1;

    using Out = std::vector<Symbol>;
    using St  = SequentialMachine::State;
    using Res = std::optional<SequentialMachine::Step>;

    Res go(St s, Out out) {
      return SequentialMachine::Step{std::move(s), std::move(out)};
    }

    void put_held(Out& out, int held) {
      if (held != kNone) {
        out.push_back(static_cast<Symbol>(held));
      }
    }

    // Prefix a^l with l changed by +1 or -1; the last prefix letter is held.
    Out shifted_prefix(int held, int delta) {
      Out out;
      if (delta > 0) {
        if (held == I) {
          return out;
        }
        put_held(out, held);
        out.push_back(A);
      } else {
        if (held == A) {
          return out;
        }
        put_held(out, held);
        out.push_back(I);
      }
      return out;
    }

    Out cat(Out a, Out const& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }

    struct Parsed {
      long             ell = 0;
      std::vector<int> lit;
      long             z   = 0;
      long             r   = 0;
      long             suffix = 0;
    };

    // Structural parse; nullopt when not a normal form.
    std::optional<Parsed> parse(Word const& w) {
      auto const& x = w.letters();
      std::size_t i = 0;
      Parsed      p;
      while (i < x.size() && (x[i] == A || x[i] == I)) {
        if (x[i] != x[0]) {
          return std::nullopt;
        }
        p.ell += x[i] == A ? 1 : -1;
        ++i;
      }
      if (i == x.size() || x[i] != H) {
        return std::nullopt;
      }
      ++i;
      long pos     = p.ell;
      bool seen_u  = false;
      bool first   = true;
      bool any     = false;  // current position carries b or ↑
      long after_u = 0;
      while (true) {
        if (i == x.size()) {
          return std::nullopt;
        }
        if (x[i] == H) {
          break;
        }
        if (!first) {
          if (x[i] != A) {
            return std::nullopt;
          }
          ++pos;
          ++i;
          if (seen_u) {
            ++after_u;
          }
          any = false;
        }
        if (first && !(x[i] == B || x[i] == U)) {
          return std::nullopt;
        }
        first = false;
        if (i < x.size() && x[i] == B) {
          p.lit.push_back(static_cast<int>(pos));
          any = true;
          ++i;
        }
        if (i < x.size() && x[i] == U) {
          if (seen_u) {
            return std::nullopt;
          }
          seen_u = true;
          p.z    = pos;
          any    = true;
          ++i;
        }
        if (i < x.size() && x[i] != A && x[i] != H) {
          return std::nullopt;
        }
        if (i < x.size() && x[i] == H && !any) {
          return std::nullopt;
        }
      }
      if (!seen_u) {
        return std::nullopt;
      }
      p.r = pos;
      ++i;
      while (i < x.size()) {
        if (x[i] != I) {
          return std::nullopt;
        }
        ++p.suffix;
        ++i;
      }
      // Blind counter: a's after ↑ must be matched by the suffix.
      if (after_u != p.suffix) {
        return std::nullopt;
      }
      return p;
    }
  }  // namespace

  AlphabetPtr lamplighter_alphabet() {
    static AlphabetPtr const sigma = Alphabet::make({"b", "a", "a'", "↑", "#"});
    return sigma;
  }

  Word lamplighter_encode(LampEl const& g) {
    long ell = g.z, r = g.z;
    if (!g.lit.empty()) {
      ell = std::min(ell, *g.lit.begin());
      r   = std::max(r, *g.lit.rbegin());
    }
    Word w(lamplighter_alphabet());
    for (long i = 0; i < std::abs(ell); ++i) {
      w.push_back(ell > 0 ? A : I);
    }
    w.push_back(H);
    for (long i = ell; i <= r; ++i) {
      if (i > ell) {
        w.push_back(A);
      }
      if (g.lit.contains(i)) {
        w.push_back(B);
      }
      if (i == g.z) {
        w.push_back(U);
      }
    }
    w.push_back(H);
    for (long i = 0; i < r - g.z; ++i) {
      w.push_back(I);
    }
    return w;
  }

  LampEl lamplighter_decode(Word const& w) {
    if (!same_alphabet(w.alphabet(), lamplighter_alphabet())) {
      throw UsageError("not a lamplighter word");
    }
    auto p = parse(w);
    if (!p) {
      throw DomainError("'" + w.str() + "' is not a lamplighter normal form");
    }
    LampEl g;
    g.z = p->z;
    g.lit.insert(p->lit.begin(), p->lit.end());
    return g;
  }

  bool lamplighter_member(Word const& w) {
    return same_alphabet(w.alphabet(), lamplighter_alphabet()) && parse(w).has_value();
  }

  bool lamplighter_viable_prefix(Word const& w) {
    if (!same_alphabet(w.alphabet(), lamplighter_alphabet())) {
      return false;
    }
    auto const& x = w.letters();
    std::size_t i = 0;
    while (i < x.size() && (x[i] == A || x[i] == I)) {
      if (x[i] != x[0]) {
        return false;
      }
      ++i;
    }
    if (i == x.size()) {
      return true;
    }
    if (x[i++] != H) {
      return false;
    }
    // Inside u: position content so far (0 none, 1 b, 2 ↑).
    bool seen_u = false, first = true, any = false;
    int  slot    = 0;
    long after_u = 0;
    for (; i < x.size() && x[i] != H; ++i) {
      switch (x[i]) {
        case A:
          if (first && !any) {
            return false;
          }
          first = false;
          any   = false;
          slot  = 0;
          after_u += seen_u ? 1 : 0;
          break;
        case B:
          if (slot != 0) {
            return false;
          }
          slot = 1;
          any  = true;
          break;
        case U:
          if (slot == 2 || seen_u) {
            return false;
          }
          slot   = 2;
          seen_u = true;
          any    = true;
          break;
        default: return false;
      }
    }
    if (i == x.size()) {
      // ↑ and a closing b can always be appended.
      return true;
    }
    if (!seen_u || !any) {
      return false;
    }
    long suffix = 0;
    for (++i; i < x.size(); ++i) {
      if (x[i] != I) {
        return false;
      }
      ++suffix;
    }
    return suffix <= after_u;
  }

  // State {pending b, seen ↑}.
  SequentialMachine lamplighter_times_b_machine() {
    SequentialMachine m;
    m.start = {0, 0};
    m.step  = [](St const& s, Symbol x) -> Res {
      bool pend = s[0] != 0;
      if (x == B) {
        return go({1, s[1]}, pend ? Out{B} : Out{});
      }
      if (x == U) {
        if (s[1]) {
          return std::nullopt;
        }
        return go({0, 1}, pend ? Out{U} : Out{B, U});
      }
      return go({0, s[1]}, pend ? Out{B, x} : Out{x});
    };
    m.finish = [](St const& s) -> std::optional<Out> {
      if (s[0] || !s[1]) {
        return std::nullopt;
      }
      return Out{};
    };
    return m;
  }

  // State {mode, held prefix letter, drop-one-suffix flag}.
  SequentialMachine lamplighter_times_a_machine() {
    enum { Prefix, First, Remove, CopyU, SawU, AfterA, Rest, Suffix };
    SequentialMachine m;
    m.start = {Prefix, kNone, 0};
    m.step  = [](St const& s, Symbol x) -> Res {
      int mode = s[0], held = s[1], drop = s[2];
      switch (mode) {
        case Prefix:
          if (x == A || x == I) {
            Out o;
            put_held(o, held);
            return go({Prefix, static_cast<int>(x), 0}, o);
          }
          if (x == H) {
            return go({First, held, 0}, {});
          }
          return std::nullopt;
        case First:
          if (x == U) {
            return go({Remove, held, 0}, {});
          }
          if (x == B) {
            Out o;
            put_held(o, held);
            return go({CopyU, kNone, 0}, cat(o, {H, B}));
          }
          return std::nullopt;
        case Remove:
          // z = l with the lamp off: position l leaves the word.
          if (x == H) {
            return go({Suffix, kNone, 0}, cat(shifted_prefix(held, +1), {H, U, H}));
          }
          if (x == A) {
            return go({AfterA, kNone, 1}, cat(shifted_prefix(held, +1), {H}));
          }
          return std::nullopt;
        case CopyU:
          if (x == U) {
            return go({SawU, kNone, 0}, {});
          }
          if (x == A || x == B) {
            return go({CopyU, kNone, 0}, {x});
          }
          return std::nullopt;
        case SawU:
          if (x == A) {
            return go({AfterA, kNone, 1}, {A});
          }
          if (x == H) {
            return go({Suffix, kNone, 0}, {A, U, H});
          }
          return std::nullopt;
        case AfterA:
          if (x == B) {
            return go({Rest, kNone, drop}, {B, U});
          }
          if (x == A) {
            return go({Rest, kNone, drop}, {U, A});
          }
          if (x == H) {
            return go({Suffix, kNone, drop}, {U, H});
          }
          return std::nullopt;
        case Rest:
          if (x == A || x == B) {
            return go({Rest, kNone, drop}, {x});
          }
          if (x == H) {
            return go({Suffix, kNone, drop}, {H});
          }
          return std::nullopt;
        case Suffix:
          if (x != I) {
            return std::nullopt;
          }
          if (drop) {
            return go({Suffix, kNone, 0}, {});
          }
          return go({Suffix, kNone, 0}, {I});
      }
      return std::nullopt;
    };
    m.finish = [](St const& s) -> std::optional<Out> {
      if (s[0] == Suffix && s[2] == 0) {
        return Out{};
      }
      return std::nullopt;
    };
    return m;
  }

  // State {mode, held prefix letter, add-one-suffix flag, held b}.
  SequentialMachine lamplighter_times_a_inverse_machine() {
    enum { Prefix, First, FirstU, FirstB, Hold, HoldU, Rest, Suffix };
    SequentialMachine m;
    m.start = {Prefix, kNone, 0, 0};
    m.step  = [](St const& s, Symbol x) -> Res {
      int mode = s[0], held = s[1], add = s[2], hb = s[3];
      switch (mode) {
        case Prefix:
          if (x == A || x == I) {
            Out o;
            put_held(o, held);
            return go({Prefix, static_cast<int>(x), 0, 0}, o);
          }
          if (x == H) {
            return go({First, held, 0, 0}, {});
          }
          return std::nullopt;
        case First:
          if (x == U) {
            return go({FirstU, held, 0, 0}, {});
          }
          if (x == B) {
            return go({FirstB, held, 0, 0}, {});
          }
          return std::nullopt;
        case FirstU:
          // z = l, lamp off; a new position l - 1 is prepended.
          if (x == H) {
            return go({Suffix, kNone, 0, 0}, cat(shifted_prefix(held, -1), {H, U, H}));
          }
          if (x == A) {
            return go({Rest, kNone, 1, 0}, cat(shifted_prefix(held, -1), {H, U, A, A}));
          }
          return std::nullopt;
        case FirstB:
          if (x == U) {
            return go({Rest, kNone, 1, 0}, cat(shifted_prefix(held, -1), {H, U, A, B}));
          }
          if (x == A) {
            Out o;
            put_held(o, held);
            return go({Hold, kNone, 0, 0}, cat(o, {H, B}));
          }
          return std::nullopt;
        case Hold:
          // An a (and its b) is held back until we know whether ↑ follows.
          if (x == A) {
            Out o{A};
            if (hb) {
              o.push_back(B);
            }
            return go({Hold, kNone, 0, 0}, o);
          }
          if (x == B) {
            if (hb) {
              return std::nullopt;
            }
            return go({Hold, kNone, 0, 1}, {});
          }
          if (x == U) {
            if (hb) {
              return go({Rest, kNone, 1, 0}, {U, A, B});
            }
            return go({HoldU, kNone, 0, 0}, {});
          }
          return std::nullopt;
        case HoldU:
          if (x == H) {
            // The last position held only the lamplighter.
            return go({Suffix, kNone, 0, 0}, {U, H});
          }
          if (x == A) {
            return go({Rest, kNone, 1, 0}, {U, A, A});
          }
          return std::nullopt;
        case Rest:
          if (x == A || x == B) {
            return go({Rest, kNone, add, 0}, {x});
          }
          if (x == H) {
            return go({Suffix, kNone, add, 0}, {H});
          }
          return std::nullopt;
        case Suffix:
          if (x != I) {
            return std::nullopt;
          }
          return go({Suffix, kNone, add, 0}, {I});
      }
      return std::nullopt;
    };
    m.finish = [](St const& s) -> std::optional<Out> {
      if (s[0] != Suffix) {
        return std::nullopt;
      }
      return s[2] ? Out{I} : Out{};
    };
    return m;
  }

  namespace {
    std::shared_ptr<SyncTransducer const> compiled(SequentialMachine const& m) {
      return std::make_shared<SyncTransducer const>(
          compile_sequential(lamplighter_alphabet(), m, 4));
    }
  }  // namespace

  RepPtr lamplighter_rep(bool tm_b) {
    static std::shared_ptr<SyncTransducer const> const ta = compiled(lamplighter_times_a_machine());
    static std::shared_ptr<SyncTransducer const> const ti =
        compiled(lamplighter_times_a_inverse_machine());
    static std::shared_ptr<SyncTransducer const> const tb = compiled(lamplighter_times_b_machine());

    auto rep      = std::make_shared<CayleyRep>();
    rep->name     = tm_b ? "lamplighter:tm" : "lamplighter";
    rep->sigma    = lamplighter_alphabet();
    rep->identity = lamplighter_encode(LampEl{});
    rep->gens     = GeneratorSet::from_names({"a", "b"}, {"b"});
    rep->language.cls    = LanguageClass::ONE_COUNTER;
    rep->language.member = [](Word const& w) {
      return lamplighter_member(w) ? Membership::In : Membership::Out;
    };
    rep->language.viable_prefix = lamplighter_viable_prefix;
    rep->multipliers.push_back(MultiplierFn::transducer(ta));
    rep->multipliers.push_back(MultiplierFn::transducer(ti));
    if (tm_b) {
      auto shipped = lamplighter_times_b(lamplighter_alphabet());
      rep->multipliers.push_back(MultiplierFn::tm(
          std::make_shared<PfProgram const>(shipped.program), shipped.budget, 1));
    } else {
      rep->multipliers.push_back(MultiplierFn::transducer(tb));
    }
    rep->time_class = TimeClass::PfLinear;
    rep->oracle     = lamplighter_oracle();
    rep->decode     = [](Word const& w) { return make_lamp(lamplighter_decode(w)); };
    rep->finalize();
    rep->validate();
    return rep;
  }

}  // namespace cayley
