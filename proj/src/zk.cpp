#include <algorithm>
#include <map>
#include <mutex>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

namespace cayley {

  namespace {
    void check_base(int k) {
      if (k < 2) {
        throw UsageError("Z[1/k] requires k >= 2, got " + std::to_string(k));
      }
    }

    Symbol point(int k) {
      return static_cast<Symbol>(k);
    }
    Symbol plus(int k) {
      return static_cast<Symbol>(k + 1);
    }
    Symbol minus(int k) {
      return static_cast<Symbol>(k + 2);
    }

    BigInt power(int k, std::size_t e) {
      BigInt r = 1;
      for (std::size_t i = 0; i < e; ++i) {
        r *= k;
      }
      return r;
    }

    // Digits of n >= 0 in base k, least significant first, at least `len` long.
    std::vector<int> digits_of(BigInt n, int k, std::size_t len) {
      std::vector<int> d;
      while (n > 0 || d.size() < len) {
        d.push_back(static_cast<int>(n % k));
        n /= k;
      }
      return d;
    }

    // Canonical number from a digit stream: d[i] has weight k^(i - ell), and
    // every digit above the stream equals fill (0 or k-1).
    ZkNumber canonical(int k, std::vector<int> d, std::size_t ell, int fill) {
      ZkNumber x;
      x.k        = k;
      x.negative = fill != 0;
      std::size_t lo = 0;
      while (lo < ell && lo < d.size() && d[lo] == 0) {
        ++lo;
      }
      while (d.size() > ell && d.back() == fill) {
        d.pop_back();
      }
      d.resize(std::max(d.size(), ell), 0);
      x.frac.assign(d.begin() + static_cast<std::ptrdiff_t>(lo),
                    d.begin() + static_cast<std::ptrdiff_t>(ell));
      x.whole.assign(d.begin() + static_cast<std::ptrdiff_t>(ell), d.end());
      return x;
    }
  }  // namespace

  AlphabetPtr zk_alphabet(int k) {
    check_base(k);
    static std::mutex                 mu;
    static std::map<int, AlphabetPtr> cache;
    std::lock_guard                   lock(mu);
    auto&                             a = cache[k];
    if (!a) {
      std::vector<std::string> names;
      for (int d = 0; d < k; ++d) {
        names.push_back(std::to_string(d));
      }
      names.insert(names.end(), {".", "+", "-"});
      a = Alphabet::make(std::move(names));
    }
    return a;
  }

  ZkNumber ZkNumber::from_rational(int k, Rational const& r) {
    check_base(k);
    BigInt      den = boost::multiprecision::denominator(r);
    BigInt      num = boost::multiprecision::numerator(r);
    // Every prime of the denominator must divide k.
    BigInt g  = den;
    BigInt kk = k;
    while (true) {
      BigInt c = boost::multiprecision::gcd(g, kk);
      if (c == 1) {
        break;
      }
      while (g % c == 0) {
        g /= c;
      }
    }
    if (g != 1) {
      throw DomainError(to_string(r) + " is not in Z[1/" + std::to_string(k) + "]");
    }
    std::size_t ell = 0;
    BigInt      kl  = 1;
    while (kl % den != 0) {
      kl *= k;
      ++ell;
    }
    BigInt d = num * (kl / den);
    if (d >= 0) {
      return canonical(k, digits_of(d, k, ell), ell, 0);
    }
    std::size_t m = 0;
    while (d + power(k, ell + m) < 0) {
      ++m;
    }
    return canonical(k, digits_of(d + power(k, ell + m), k, ell + m), ell, k - 1);
  }

  Rational ZkNumber::value() const {
    BigInt      d   = 0;
    std::size_t ell = frac.size();
    for (std::size_t i = whole.size(); i-- > 0;) {
      d = d * k + whole[i];
    }
    for (std::size_t i = ell; i-- > 0;) {
      d = d * k + frac[i];
    }
    if (negative) {
      d -= power(k, ell + whole.size());
    }
    return Rational(d, power(k, ell));
  }

  Word zk_encode(ZkNumber const& x, AlphabetPtr const& sigma) {
    Word w(sigma);
    for (int d : x.frac) {
      w.push_back(static_cast<Symbol>(d));
    }
    w.push_back(point(x.k));
    for (int d : x.whole) {
      w.push_back(static_cast<Symbol>(d));
    }
    w.push_back(x.negative ? minus(x.k) : plus(x.k));
    return w;
  }

  Word zk_encode(int k, Rational const& r, AlphabetPtr const& sigma) {
    return zk_encode(ZkNumber::from_rational(k, r), sigma);
  }

  ZkNumber zk_decode(int k, Word const& w) {
    check_base(k);
    auto const& x = w.letters();
    ZkNumber    z;
    z.k = k;
    std::size_t i = 0;
    while (i < x.size() && x[i] < point(k)) {
      z.frac.push_back(static_cast<int>(x[i++]));
    }
    if (i == x.size() || x[i] != point(k)) {
      throw DomainError("missing radix point in '" + w.str() + "'");
    }
    ++i;
    while (i < x.size() && x[i] < point(k)) {
      z.whole.push_back(static_cast<int>(x[i++]));
    }
    if (i + 1 != x.size() || (x[i] != plus(k) && x[i] != minus(k))) {
      throw DomainError("missing or misplaced sign in '" + w.str() + "'");
    }
    z.negative = x[i] == minus(k);
    int fill   = z.negative ? k - 1 : 0;
    if (!z.frac.empty() && z.frac.front() == 0) {
      throw DomainError("low fractional zero in '" + w.str() + "'");
    }
    if (!z.whole.empty() && z.whole.back() == fill) {
      throw DomainError("redundant leading digit in '" + w.str() + "'");
    }
    return z;
  }

  bool zk_member(int k, Word const& w) {
    try {
      (void)zk_decode(k, w);
      return true;
    } catch (DomainError const&) {
      return false;
    }
  }

  Dfa zk_language(int k, AlphabetPtr const& sigma) {
    check_base(k);
    Dfa d(sigma);
    enum { F0, F1, W0, WZero, WTop, WOther, End };
    for (int i = 0; i <= End; ++i) {
      d.add_state(i == End);
    }
    d.set_start(F0);
    for (int x = 0; x < k; ++x) {
      auto s = static_cast<Symbol>(x);
      if (x != 0) {
        d.set_transition(F0, s, F1);
      }
      d.set_transition(F1, s, F1);
      int to = x == 0 ? WZero : (x == k - 1 ? WTop : WOther);
      for (int from : {W0, WZero, WTop, WOther}) {
        d.set_transition(from, s, to);
      }
    }
    d.set_transition(F0, point(k), W0);
    d.set_transition(F1, point(k), W0);
    for (int from : {W0, WTop, WOther}) {
      d.set_transition(from, plus(k), End);
    }
    for (int from : {W0, WZero, WOther}) {
      d.set_transition(from, minus(k), End);
    }
    return d.minimized();
  }

  // State {mode, held/pending digit (-1 none), carry + 1, fractional digits seen (cap 2)}.
  SequentialMachine zk_add_machine(int k, int sign, bool fractional) {
    check_base(k);
    if (sign != 1 && sign != -1) {
      throw UsageError("zk_add_machine: sign must be +1 or -1");
    }
    enum { Frac, Whole, Done };
    using Out = std::vector<Symbol>;
    using St  = SequentialMachine::State;
    using Res = std::optional<SequentialMachine::Step>;
    auto go   = [](St s, Out o) -> Res { return SequentialMachine::Step{std::move(s), std::move(o)}; };
    SequentialMachine m;
    m.start = {Frac, -1, 1, 0};
    m.step  = [=](St const& s, Symbol x) -> Res {
      int mode = s[0], held = s[1], carry = s[2] - 1, seen = s[3];
      bool digit = x < point(k);
      switch (mode) {
        case Frac:
          if (digit) {
            if (!fractional) {
              return go({Frac, -1, 1, std::min(seen + 1, 2)}, {x});
            }
            Out o;
            if (held >= 0) {
              o.push_back(static_cast<Symbol>(held));
            }
            return go({Frac, static_cast<int>(x), 1, std::min(seen + 1, 2)}, o);
          }
          if (x != point(k)) {
            return std::nullopt;
          }
          if (!fractional) {
            return go({Whole, -1, sign + 1, 0}, {point(k)});
          }
          {
            // The k^-1 digit is the last fractional digit (0 when absent).
            int d = (held >= 0 ? held : 0) + sign;
            int c = d < 0 ? -1 : (d >= k ? 1 : 0);
            d -= c * k;
            Out o;
            if (!(d == 0 && seen <= 1)) {
              o.push_back(static_cast<Symbol>(d));
            }
            o.push_back(point(k));
            return go({Whole, -1, c + 1, 0}, o);
          }
        case Whole: {
          if (digit) {
            int d = static_cast<int>(x) + carry;
            int c = d < 0 ? -1 : (d >= k ? 1 : 0);
            d -= c * k;
            Out o;
            if (held >= 0) {
              o.push_back(static_cast<Symbol>(held));
            }
            return go({Whole, d, c + 1, 0}, o);
          }
          if (x != plus(k) && x != minus(k)) {
            return std::nullopt;
          }
          int fill = x == minus(k) ? k - 1 : 0;
          Out o;
          if (carry == 0) {
            if (held >= 0 && held != fill) {
              o.push_back(static_cast<Symbol>(held));
            }
            o.push_back(x);
            return go({Done, -1, 1, 0}, o);
          }
          int t = fill + carry;
          if (t == k) {
            // ...(k-1)(k-1) + 1 rolls over to all zeros.
            if (held >= 0 && held != 0) {
              o.push_back(static_cast<Symbol>(held));
            }
            o.push_back(plus(k));
          } else if (t == -1) {
            if (held >= 0 && held != k - 1) {
              o.push_back(static_cast<Symbol>(held));
            }
            o.push_back(minus(k));
          } else {
            if (held >= 0) {
              o.push_back(static_cast<Symbol>(held));
            }
            o.push_back(static_cast<Symbol>(t));
            o.push_back(x);
          }
          return go({Done, -1, 1, 0}, o);
        }
        default:
          return std::nullopt;
      }
    };
    m.finish = [](St const& s) -> std::optional<std::vector<Symbol>> {
      if (s[0] != Done) {
        return std::nullopt;
      }
      return std::vector<Symbol>{};
    };
    return m;
  }

  std::shared_ptr<SyncTransducer const> zk_add_transducer(int k, int sign, bool fractional) {
    static std::mutex                                                        mu;
    static std::map<std::tuple<int, int, bool>, std::shared_ptr<SyncTransducer const>> cache;
    std::lock_guard lock(mu);
    auto&           t = cache[{k, sign, fractional}];
    if (!t) {
      t = std::make_shared<SyncTransducer const>(
          compile_sequential(zk_alphabet(k), zk_add_machine(k, sign, fractional), 3));
    }
    return t;
  }

  Word zk_add(int k, Word const& x, Word const& y) {
    auto a = zk_decode(k, x);
    auto b = zk_decode(k, y);
    // Both operands are read digit by digit from the radix-aligned low end;
    // past its last digit each operand repeats its fill digit.
    std::size_t ell = std::max(a.frac.size(), b.frac.size());
    std::size_t top = std::max(a.whole.size(), b.whole.size()) + 2;
    auto digit = [ell](ZkNumber const& z, std::size_t i) {
      std::size_t off = ell - z.frac.size();
      if (i < off) {
        return 0;
      }
      i -= off;
      if (i < z.frac.size()) {
        return z.frac[i];
      }
      i -= z.frac.size();
      if (i < z.whole.size()) {
        return z.whole[i];
      }
      return z.negative ? z.k - 1 : 0;
    };
    std::vector<int> out;
    int              carry = 0;
    for (std::size_t i = 0; i < ell + top; ++i) {
      int s = digit(a, i) + digit(b, i) + carry;
      out.push_back(s % k);
      carry = s / k;
    }
    // Above the scan both operands repeat their fills; the sum repeats
    // (fa + fb + carry) mod k with a stable carry.
    int fa   = a.negative ? k - 1 : 0;
    int fb   = b.negative ? k - 1 : 0;
    int fill = (fa + fb + carry) % k;
    return zk_encode(canonical(k, std::move(out), ell, fill), x.alphabet());
  }

  Word zk_scale(int k, Rational const& t, Word const& w) {
    auto v = zk_decode(k, w).value() * t;
    return zk_encode(k, v, w.alphabet());
  }

  RepPtr zk_rep(int k) {
    check_base(k);
    auto        rep  = std::make_shared<CayleyRep>();
    std::string frac = "1/" + std::to_string(k);
    rep->name        = "zk:" + std::to_string(k);
    rep->sigma       = zk_alphabet(k);
    rep->identity    = zk_encode(ZkNumber{k, {}, {}, false}, rep->sigma);
    rep->gens        = GeneratorSet::from_names({"1", frac});
    rep->language.cls = LanguageClass::REG;
    rep->language.dfa = zk_language(k, rep->sigma);
    for (auto [sign, fractional] :
         {std::pair{1, false}, {-1, false}, {1, true}, {-1, true}}) {
      rep->multipliers.push_back(MultiplierFn::transducer(zk_add_transducer(k, sign, fractional)));
    }
    rep->time_class = TimeClass::PfLinear;
    Rational const inv_k(1, k);
    rep->oracle = matrix_oracle(rep->name + "-matrix",
                                {{"1", RatMatrix(2, {1, 1, 0, 1}), "1'"},
                                 {frac, RatMatrix(2, {1, inv_k, 0, 1}), frac + "'"}});
    rep->decode = [k](Word const& w) {
      return make_matrix(RatMatrix(2, {1, zk_decode(k, w).value(), 0, 1}));
    };
    rep->finalize();
    rep->validate();
    return rep;
  }

  // Normal form x_1 ... x_n with block j a power of the j-th letter.
  RepPtr zn_rep(int n) {
    if (n < 1 || n > 26) {
      throw UsageError("zn:n requires 1 <= n <= 26");
    }
    std::vector<std::string> letters;
    for (int i = 0; i < n; ++i) {
      letters.emplace_back(1, static_cast<char>('a' + i));
    }
    auto rep      = std::make_shared<CayleyRep>();
    rep->name     = "zn:" + std::to_string(n);
    rep->gens     = GeneratorSet::from_names(letters);
    rep->sigma    = rep->gens.symbols;
    rep->identity = Word(rep->sigma);
    rep->language.cls = LanguageClass::REG;
    {
      // States: 0 start, then (block, sign) pairs.
      Dfa d(rep->sigma);
      d.add_state(true);
      for (int i = 0; i < 2 * n; ++i) {
        d.add_state(true);
      }
      for (int from = 0; from <= 2 * n; ++from) {
        int block = from == 0 ? -1 : (from - 1) / 2;
        for (Symbol x = 0; x < rep->sigma->size(); ++x) {
          int b = static_cast<int>(x) / 2;
          if (b > block || (b == block && static_cast<int>(x) == from - 1)) {
            d.set_transition(from, x, static_cast<int>(x) + 1);
          }
        }
      }
      rep->language.dfa = d.minimized();
    }
    using St  = SequentialMachine::State;
    using Res = std::optional<SequentialMachine::Step>;
    for (Symbol g = 0; g < rep->sigma->size(); ++g) {
      int const j = static_cast<int>(g) / 2;
      // State {last symbol + 1, done}.
      SequentialMachine m;
      m.start = {0, 0};
      m.step  = [g, j](St const& s, Symbol x) -> Res {
        int last = s[0] - 1, b = static_cast<int>(x) / 2;
        if (last >= 0 && (b < last / 2 || (b == last / 2 && static_cast<int>(x) != last))) {
          return std::nullopt;
        }
        St next{static_cast<int>(x) + 1, 1};
        if (s[1] || b < j) {
          next[1] = s[1];
          return SequentialMachine::Step{next, {x}};
        }
        if (b == j) {
          // Same sign: grow the block; opposite sign: cancel its first letter.
          if (x == g) {
            return SequentialMachine::Step{next, {g, x}};
          }
          return SequentialMachine::Step{next, {}};
        }
        return SequentialMachine::Step{next, {g, x}};
      };
      m.finish = [g](St const& s) -> std::optional<std::vector<Symbol>> {
        if (s[1]) {
          return std::vector<Symbol>{};
        }
        return std::vector<Symbol>{g};
      };
      rep->multipliers.push_back(MultiplierFn::transducer(
          std::make_shared<SyncTransducer const>(compile_sequential(rep->sigma, m, 2))));
    }
    rep->time_class = TimeClass::PfLinear;
    // Z^n as unipotent translations of Q^n.
    std::vector<MatrixGenerator> mg;
    for (int i = 0; i < n; ++i) {
      RatMatrix t = RatMatrix::identity(static_cast<std::size_t>(n) + 1);
      t(0, static_cast<std::size_t>(i) + 1) = 1;
      mg.push_back({letters[static_cast<std::size_t>(i)], t, letters[static_cast<std::size_t>(i)] + "'"});
    }
    rep->oracle = matrix_oracle(rep->name + "-matrix", mg);
    rep->decode = [n](Word const& w) {
      RatMatrix t = RatMatrix::identity(static_cast<std::size_t>(n) + 1);
      for (auto x : w) {
        t(0, x / 2 + 1) += (x % 2 == 0) ? 1 : -1;
      }
      return make_matrix(t);
    };
    rep->finalize();
    rep->validate();
    return rep;
  }

}  // namespace cayley
