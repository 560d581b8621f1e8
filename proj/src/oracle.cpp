#include "cayley/oracle.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "cayley/errors.hpp"

namespace cayley {

  namespace {
    Symbol inverse_by_name(Alphabet const& a, Symbol s) {
      auto n = a.name(s);
      if (!n.empty() && n.back() == '\'') {
        if (auto b = a.find(n.substr(0, n.size() - 1))) {
          return *b;
        }
      } else if (auto b = a.find(n + "'")) {
        return *b;
      }
      return s;
    }

    std::string lamp_key(LampEl const& e) {
      std::string k = "lit={";
      bool        first = true;
      for (auto i : e.lit) {
        k += (first ? "" : ",") + std::to_string(i);
        first = false;
      }
      return k + "} z=" + std::to_string(e.z);
    }
  }  // namespace

  OracleElement make_lamp(LampEl e) {
    auto k = lamp_key(e);
    return {std::move(e), std::move(k)};
  }

  OracleElement make_matrix(RatMatrix m) {
    auto k = m.str();
    return {std::move(m), std::move(k)};
  }

  OracleElement make_britton(BrittonForm f) {
    auto k = britton_str(f);
    return {std::move(f), std::move(k)};
  }

  OracleElement make_free(FreeWord w, std::vector<std::string> const& names) {
    std::string k;
    for (auto l : w.letters) {
      if (!k.empty()) {
        k += ' ';
      }
      k += names.at(static_cast<std::size_t>(std::abs(l) - 1));
      if (l < 0) {
        k += '\'';
      }
    }
    if (k.empty()) {
      k = "e";
    }
    return {std::move(w), std::move(k)};
  }

  OracleElement make_pair(OracleElement x, OracleElement y) {
    auto      k = "(" + x.key + " | " + y.key + ")";
    Composite c;
    c.parts = {std::move(x), std::move(y)};
    return {std::move(c), std::move(k)};
  }

  OracleElement make_blocks(std::vector<OracleElement> blocks, std::vector<int> factors) {
    std::string k = "<";
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      k += (i ? " * " : "") + std::to_string(factors[i]) + ":" + blocks[i].key;
    }
    k += ">";
    Composite c{std::move(blocks), std::move(factors)};
    return {std::move(c), std::move(k)};
  }

  OracleElement make_coset(OracleElement h, int k, std::string const& coset_name) {
    auto      key = "(" + h.key + ")." + coset_name;
    Composite c{{std::move(h)}, {k}};
    return {std::move(c), std::move(key)};
  }

  OracleElement evaluate_word(GroupOracle const& o, Word const& v) {
    if (!same_alphabet(v.alphabet(), o.generators())) {
      throw UsageError("evaluate_word: word is not over the oracle's generators");
    }
    auto g = o.identity();
    for (auto s : v) {
      g = o.act(g, s);
    }
    return g;
  }

  OracleElement evaluate_word(GroupOracle const& o, std::string_view text) {
    return evaluate_word(o, Word::parse(o.generators(), text));
  }

  namespace {
    class LamplighterOracle final : public GroupOracle {
     public:
      LamplighterOracle() : _gens(Alphabet::make({"a", "a'", "b"})) {}
      std::string name() const override {
        return "lamplighter";
      }
      AlphabetPtr generators() const override {
        return _gens;
      }
      Symbol inverse_of(Symbol s) const override {
        return s == 2 ? 2 : 1 - s;
      }
      OracleElement identity() const override {
        return make_lamp({});
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        auto e = std::get<LampEl>(g.value);
        if (s == 0) {
          ++e.z;
        } else if (s == 1) {
          --e.z;
        } else if (!e.lit.erase(e.z)) {
          e.lit.insert(e.z);
        }
        return make_lamp(std::move(e));
      }
      std::optional<OracleElement> inverse(OracleElement const& g) const override {
        auto const& e = std::get<LampEl>(g.value);
        LampEl      r;
        r.z = -e.z;
        for (auto i : e.lit) {
          r.lit.insert(i - e.z);
        }
        return make_lamp(std::move(r));
      }
      std::optional<OracleElement> multiply(OracleElement const& g,
                                            OracleElement const& h) const override {
        // (f, z)(f', z') = (f + f'(. - z), z + z')
        auto const& x = std::get<LampEl>(g.value);
        auto const& y = std::get<LampEl>(h.value);
        LampEl      r = x;
        for (auto i : y.lit) {
          if (!r.lit.erase(i + x.z)) {
            r.lit.insert(i + x.z);
          }
        }
        r.z = x.z + y.z;
        return make_lamp(std::move(r));
      }

     private:
      AlphabetPtr _gens;
    };

    class MatrixOracle final : public GroupOracle {
     public:
      MatrixOracle(std::string name, std::vector<MatrixGenerator> gens) : _name(std::move(name)) {
        if (gens.empty()) {
          throw UsageError("matrix oracle needs generators");
        }
        _n = gens.front().matrix.dim();
        std::vector<std::string> names;
        for (auto const& g : gens) {
          if (g.matrix.dim() != _n) {
            throw UsageError("matrix generators of different dimensions");
          }
          if (g.matrix.determinant() == 0) {
            throw DomainError("singular generator matrix " + g.name);
          }
          names.push_back(g.name);
          _mats.push_back(g.matrix);
          _inv.push_back(0);
          if (!g.inverse_name.empty()) {
            names.push_back(g.inverse_name);
            _mats.push_back(g.matrix.inverse());
            _inv.push_back(0);
            _inv[_inv.size() - 2] = static_cast<Symbol>(_inv.size() - 1);
            _inv.back()           = static_cast<Symbol>(_inv.size() - 2);
          } else {
            if (!(g.matrix * g.matrix == RatMatrix::identity(_n))) {
              throw UsageError("generator " + g.name + " declared self-inverse but is not");
            }
            _inv.back() = static_cast<Symbol>(_inv.size() - 1);
          }
        }
        _gens = Alphabet::make(names);
      }
      std::string name() const override {
        return _name;
      }
      AlphabetPtr generators() const override {
        return _gens;
      }
      Symbol inverse_of(Symbol s) const override {
        return _inv.at(s);
      }
      OracleElement identity() const override {
        return make_matrix(RatMatrix::identity(_n));
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        return make_matrix(std::get<RatMatrix>(g.value) * _mats.at(s));
      }
      std::optional<OracleElement> inverse(OracleElement const& g) const override {
        return make_matrix(std::get<RatMatrix>(g.value).inverse());
      }
      std::optional<OracleElement> multiply(OracleElement const& g,
                                            OracleElement const& h) const override {
        return make_matrix(std::get<RatMatrix>(g.value) * std::get<RatMatrix>(h.value));
      }

     private:
      std::string            _name;
      std::size_t            _n = 0;
      AlphabetPtr            _gens;
      std::vector<RatMatrix> _mats;
      std::vector<Symbol>    _inv;
    };

    // a^{e0} t^{s1} a^{e1} ... t^{sm} a^{em}
    struct Syllables {
      BigInt                           head;
      std::vector<std::pair<int, BigInt>> rest;

      BigInt& last() {
        return rest.empty() ? head : rest.back().second;
      }
    };

    bool is_pinch(int p, int q, int s1, BigInt const& e, int s2) {
      if (s1 != -s2) {
        return false;
      }
      return s1 == 1 ? e % p == 0 : e % q == 0;
    }

    BigInt pinch_value(int p, int q, int s1, BigInt const& e) {
      return s1 == 1 ? BigInt(e / p * q) : BigInt(e / q * p);
    }

    // Appends t^s with the pinch check against the last t.
    void push_t(int p, int q, Syllables& w, int s) {
      if (!w.rest.empty() && is_pinch(p, q, w.rest.back().first, w.rest.back().second, s)) {
        auto [s1, e] = w.rest.back();
        w.rest.pop_back();
        w.last() += pinch_value(p, q, s1, e);
        return;
      }
      w.rest.emplace_back(s, 0);
    }

    Syllables from_form(BrittonForm const& f) {
      Syllables w;
      auto const& s = f.syllables;
      if (s.empty()) {
        w.head = f.tail;
        return w;
      }
      w.head = s[0].a;
      for (std::size_t i = 0; i < s.size(); ++i) {
        w.rest.emplace_back(s[i].eps, i + 1 < s.size() ? BigInt(s[i + 1].a) : f.tail);
      }
      return w;
    }

    BrittonForm collect(int p, int q, Syllables const& w) {
      BrittonForm f;
      f.p        = p;
      f.q        = q;
      BigInt cur = w.head;
      for (auto const& [s, e] : w.rest) {
        BigInt m_ = floor_div(cur, s == 1 ? q : p);
        BigInt r  = cur - m_ * (s == 1 ? q : p);
        f.syllables.push_back({static_cast<long>(r), s});
        cur = e + m_ * (s == 1 ? p : q);
      }
      f.tail = cur;
      return f;
    }

    class BrittonOracle final : public GroupOracle {
     public:
      BrittonOracle(int p, int q) : _p(p), _q(q), _gens(Alphabet::make({"a", "a'", "t", "t'"})) {
        if (p < 1 || q <= p) {
          throw UsageError("BS(p,q) requires 1 <= p < q");
        }
      }
      std::string name() const override {
        return "britton:" + std::to_string(_p) + ":" + std::to_string(_q);
      }
      AlphabetPtr generators() const override {
        return _gens;
      }
      Symbol inverse_of(Symbol s) const override {
        return s ^ 1u;
      }
      OracleElement identity() const override {
        BrittonForm f;
        f.p = _p;
        f.q = _q;
        return make_britton(f);
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        auto w = from_form(std::get<BrittonForm>(g.value));
        apply(w, s);
        return make_britton(collect(_p, _q, w));
      }
      std::optional<OracleElement> inverse(OracleElement const& g) const override {
        auto      w = from_form(std::get<BrittonForm>(g.value));
        Syllables r;
        r.head = -w.last();
        for (std::size_t i = w.rest.size(); i-- > 0;) {
          push_t(_p, _q, r, -w.rest[i].first);
          r.last() -= i == 0 ? w.head : w.rest[i - 1].second;
        }
        return make_britton(collect(_p, _q, r));
      }
      std::optional<OracleElement> multiply(OracleElement const& g,
                                            OracleElement const& h) const override {
        auto w = from_form(std::get<BrittonForm>(g.value));
        auto x = from_form(std::get<BrittonForm>(h.value));
        w.last() += x.head;
        for (auto const& [s, e] : x.rest) {
          push_t(_p, _q, w, s);
          w.last() += e;
        }
        return make_britton(collect(_p, _q, w));
      }

     private:
      void apply(Syllables& w, Symbol s) const {
        switch (s) {
          case 0: w.last() += 1; break;
          case 1: w.last() -= 1; break;
          case 2: push_t(_p, _q, w, 1); break;
          default: push_t(_p, _q, w, -1); break;
        }
      }

      int         _p, _q;
      AlphabetPtr _gens;
    };

    class FreeOracle final : public GroupOracle {
     public:
      explicit FreeOracle(std::vector<std::string> names) : _names(std::move(names)) {
        std::vector<std::string> s;
        for (auto const& n : _names) {
          s.push_back(n);
          s.push_back(n + "'");
        }
        _gens = Alphabet::make(s);
      }
      std::string name() const override {
        return "free:" + std::to_string(_names.size());
      }
      AlphabetPtr generators() const override {
        return _gens;
      }
      Symbol inverse_of(Symbol s) const override {
        return s ^ 1u;
      }
      OracleElement identity() const override {
        return make_free({}, _names);
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        auto w = std::get<FreeWord>(g.value);
        push(w, letter(s));
        return make_free(std::move(w), _names);
      }
      std::optional<OracleElement> inverse(OracleElement const& g) const override {
        auto w = std::get<FreeWord>(g.value);
        std::reverse(w.letters.begin(), w.letters.end());
        for (auto& l : w.letters) {
          l = -l;
        }
        return make_free(std::move(w), _names);
      }
      std::optional<OracleElement> multiply(OracleElement const& g,
                                            OracleElement const& h) const override {
        auto w = std::get<FreeWord>(g.value);
        for (auto l : std::get<FreeWord>(h.value).letters) {
          push(w, l);
        }
        return make_free(std::move(w), _names);
      }

     private:
      static int letter(Symbol s) {
        int i = static_cast<int>(s / 2) + 1;
        return s % 2 ? -i : i;
      }
      static void push(FreeWord& w, int l) {
        if (!w.letters.empty() && w.letters.back() == -l) {
          w.letters.pop_back();
        } else {
          w.letters.push_back(l);
        }
      }

      std::vector<std::string> _names;
      AlphabetPtr              _gens;
    };

    // Generators of a two-factor oracle: the first |S_x| symbols act on x.
    class TwoFactor : public GroupOracle {
     public:
      TwoFactor(OraclePtr x, OraclePtr y, AlphabetPtr gens)
          : _x(std::move(x)), _y(std::move(y)), _gens(std::move(gens)) {
        if (_gens->size() != _x->generators()->size() + _y->generators()->size()) {
          throw UsageError("two-factor oracle: generator count mismatch");
        }
      }
      AlphabetPtr generators() const override {
        return _gens;
      }
      Symbol inverse_of(Symbol s) const override {
        auto nx = static_cast<Symbol>(_x->generators()->size());
        return s < nx ? _x->inverse_of(s) : nx + _y->inverse_of(s - nx);
      }

     protected:
      std::pair<int, Symbol> split(Symbol s) const {
        auto nx = static_cast<Symbol>(_x->generators()->size());
        return s < nx ? std::pair{0, s} : std::pair{1, s - nx};
      }
      GroupOracle const& factor(int i) const {
        return i == 0 ? *_x : *_y;
      }

      OraclePtr   _x, _y;
      AlphabetPtr _gens;
    };

    class PairOracle final : public TwoFactor {
     public:
      using TwoFactor::TwoFactor;
      std::string name() const override {
        return "(" + _x->name() + " x " + _y->name() + ")";
      }
      OracleElement identity() const override {
        return make_pair(_x->identity(), _y->identity());
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        auto const& c      = std::get<Composite>(g.value);
        auto [f, local]    = split(s);
        auto parts         = c.parts;
        parts[static_cast<std::size_t>(f)] = factor(f).act(parts[static_cast<std::size_t>(f)], local);
        return make_pair(std::move(parts[0]), std::move(parts[1]));
      }
      std::optional<OracleElement> inverse(OracleElement const& g) const override {
        auto const& c = std::get<Composite>(g.value);
        auto        a = _x->inverse(c.parts[0]);
        auto        b = _y->inverse(c.parts[1]);
        if (!a || !b) {
          return std::nullopt;
        }
        return make_pair(std::move(*a), std::move(*b));
      }
      std::optional<OracleElement> multiply(OracleElement const& g,
                                            OracleElement const& h) const override {
        auto const& c = std::get<Composite>(g.value);
        auto const& d = std::get<Composite>(h.value);
        auto        a = _x->multiply(c.parts[0], d.parts[0]);
        auto        b = _y->multiply(c.parts[1], d.parts[1]);
        if (!a || !b) {
          return std::nullopt;
        }
        return make_pair(std::move(*a), std::move(*b));
      }
    };

    class FreeProductOracle final : public TwoFactor {
     public:
      using TwoFactor::TwoFactor;
      std::string name() const override {
        return "(" + _x->name() + " * " + _y->name() + ")";
      }
      OracleElement identity() const override {
        return make_blocks({}, {});
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        auto c          = std::get<Composite>(g.value);
        auto [f, local] = split(s);
        if (!c.labels.empty() && c.labels.back() == f) {
          auto nb = factor(f).act(c.parts.back(), local);
          c.parts.pop_back();
          c.labels.pop_back();
          push(c, std::move(nb), f);
        } else {
          push(c, factor(f).act(factor(f).identity(), local), f);
        }
        return make_blocks(std::move(c.parts), std::move(c.labels));
      }
      std::optional<OracleElement> inverse(OracleElement const& g) const override {
        auto const& c = std::get<Composite>(g.value);
        Composite   r;
        for (std::size_t i = c.parts.size(); i-- > 0;) {
          auto inv = factor(c.labels[i]).inverse(c.parts[i]);
          if (!inv) {
            return std::nullopt;
          }
          r.parts.push_back(std::move(*inv));
          r.labels.push_back(c.labels[i]);
        }
        return make_blocks(std::move(r.parts), std::move(r.labels));
      }
      std::optional<OracleElement> multiply(OracleElement const& g,
                                            OracleElement const& h) const override {
        auto        c = std::get<Composite>(g.value);
        auto const& d = std::get<Composite>(h.value);
        for (std::size_t i = 0; i < d.parts.size(); ++i) {
          int f = d.labels[i];
          if (!c.labels.empty() && c.labels.back() == f) {
            auto m = factor(f).multiply(c.parts.back(), d.parts[i]);
            if (!m) {
              return std::nullopt;
            }
            c.parts.pop_back();
            c.labels.pop_back();
            push(c, std::move(*m), f);
          } else {
            c.parts.push_back(d.parts[i]);
            c.labels.push_back(f);
          }
        }
        return make_blocks(std::move(c.parts), std::move(c.labels));
      }

     private:
      void push(Composite& c, OracleElement e, int f) const {
        if (e == factor(f).identity()) {
          return;
        }
        c.parts.push_back(std::move(e));
        c.labels.push_back(f);
      }
    };

    class SubgroupOracle final : public GroupOracle {
     public:
      SubgroupOracle(OraclePtr parent, AlphabetPtr gens, std::vector<Word> images)
          : _parent(std::move(parent)), _gens(std::move(gens)), _images(std::move(images)) {
        if (_images.size() != _gens->size()) {
          throw UsageError("subgroup oracle: one image word per generator");
        }
        for (auto const& w : _images) {
          if (!same_alphabet(w.alphabet(), _parent->generators())) {
            throw UsageError("subgroup oracle: image not over the parent generators");
          }
        }
      }
      std::string name() const override {
        return "sub(" + _parent->name() + ")";
      }
      AlphabetPtr generators() const override {
        return _gens;
      }
      Symbol inverse_of(Symbol s) const override {
        return inverse_by_name(*_gens, s);
      }
      OracleElement identity() const override {
        return _parent->identity();
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        auto h = g;
        for (auto x : _images.at(s)) {
          h = _parent->act(h, x);
        }
        return h;
      }
      std::optional<OracleElement> inverse(OracleElement const& g) const override {
        return _parent->inverse(g);
      }
      std::optional<OracleElement> multiply(OracleElement const& g,
                                            OracleElement const& h) const override {
        return _parent->multiply(g, h);
      }

     private:
      OraclePtr         _parent;
      AlphabetPtr       _gens;
      std::vector<Word> _images;
    };

    class CosetOracle final : public GroupOracle {
     public:
      CosetOracle(OraclePtr h, AlphabetPtr gens, std::vector<std::string> cosets,
                  std::vector<std::vector<CosetRule>> rules)
          : _h(std::move(h)),
            _gens(std::move(gens)),
            _cosets(std::move(cosets)),
            _rules(std::move(rules)) {
        if (_rules.size() != _cosets.size()) {
          throw UsageError("coset oracle: one rule row per coset");
        }
        for (auto const& row : _rules) {
          if (row.size() != _gens->size()) {
            throw UsageError("coset oracle: rule table incomplete");
          }
        }
      }
      std::string name() const override {
        return "ext(" + _h->name() + ")";
      }
      AlphabetPtr generators() const override {
        return _gens;
      }
      Symbol inverse_of(Symbol s) const override {
        return inverse_by_name(*_gens, s);
      }
      OracleElement identity() const override {
        return make_coset(_h->identity(), 0, _cosets[0]);
      }
      OracleElement act(OracleElement const& g, Symbol s) const override {
        auto const& c    = std::get<Composite>(g.value);
        auto const& rule = _rules.at(static_cast<std::size_t>(c.labels[0])).at(s);
        auto        h    = c.parts[0];
        for (auto x : rule.word) {
          h = _h->act(h, x);
        }
        return make_coset(std::move(h), rule.next, _cosets.at(static_cast<std::size_t>(rule.next)));
      }

     private:
      OraclePtr                           _h;
      AlphabetPtr                         _gens;
      std::vector<std::string>            _cosets;
      std::vector<std::vector<CosetRule>> _rules;
    };
  }  // namespace

  OraclePtr lamplighter_oracle() {
    return std::make_shared<LamplighterOracle>();
  }

  OraclePtr matrix_oracle(std::string name, std::vector<MatrixGenerator> gens) {
    return std::make_shared<MatrixOracle>(std::move(name), std::move(gens));
  }

  OraclePtr bs_matrix_oracle(int q) {
    RatMatrix a(2, {1, 1, 0, 1});
    RatMatrix t(2, {q, 0, 0, 1});
    return matrix_oracle("bs-matrix:1:" + std::to_string(q), {{"a", a, "a'"}, {"t", t, "t'"}});
  }

  OraclePtr heisenberg_oracle() {
    RatMatrix a(3, {1, 1, 0, 0, 1, 0, 0, 0, 1});
    RatMatrix b(3, {1, 0, 0, 0, 1, 1, 0, 0, 1});
    RatMatrix c(3, {1, 0, 1, 0, 1, 0, 0, 0, 1});
    return matrix_oracle("heisenberg-matrix", {{"a", a, "a'"}, {"b", b, "b'"}, {"c", c, "c'"}});
  }

  OraclePtr britton_oracle(int p, int q) {
    return std::make_shared<BrittonOracle>(p, q);
  }

  OraclePtr free_oracle(std::vector<std::string> names) {
    return std::make_shared<FreeOracle>(std::move(names));
  }

  OraclePtr pair_oracle(OraclePtr x, OraclePtr y, AlphabetPtr generators) {
    return std::make_shared<PairOracle>(std::move(x), std::move(y), std::move(generators));
  }

  OraclePtr free_product_oracle(OraclePtr x, OraclePtr y, AlphabetPtr generators) {
    return std::make_shared<FreeProductOracle>(std::move(x), std::move(y), std::move(generators));
  }

  OraclePtr subgroup_oracle(OraclePtr parent, AlphabetPtr generators, std::vector<Word> images) {
    return std::make_shared<SubgroupOracle>(std::move(parent), std::move(generators),
                                            std::move(images));
  }

  OraclePtr coset_oracle(OraclePtr h, AlphabetPtr generators, std::vector<std::string> coset_names,
                         std::vector<std::vector<CosetRule>> rules) {
    return std::make_shared<CosetOracle>(std::move(h), std::move(generators),
                                         std::move(coset_names), std::move(rules));
  }

  BrittonForm britton_reduce(int p, int q, Word const& v, PinchOrder order) {
    if (p < 1 || q <= p) {
      throw UsageError("BS(p,q) requires 1 <= p < q");
    }
    Syllables w;
    for (auto s : v) {
      auto n = v.alphabet()->name(s);
      if (n == "a") {
        w.last() += 1;
      } else if (n == "a'") {
        w.last() -= 1;
      } else if (n == "t") {
        w.rest.emplace_back(1, 0);
      } else if (n == "t'") {
        w.rest.emplace_back(-1, 0);
      } else {
        throw UsageError("britton_reduce: unknown letter '" + n + "'");
      }
    }
    // pinch at i: t^{s_i} a^{e_i} t^{s_{i+1}}
    for (;;) {
      std::optional<std::size_t> hit;
      for (std::size_t k = 0; k + 1 < w.rest.size(); ++k) {
        std::size_t i = order == PinchOrder::Leftmost ? k : w.rest.size() - 2 - k;
        if (is_pinch(p, q, w.rest[i].first, w.rest[i].second, w.rest[i + 1].first)) {
          hit = i;
          break;
        }
      }
      if (!hit) {
        break;
      }
      std::size_t i     = *hit;
      BigInt      value = pinch_value(p, q, w.rest[i].first, w.rest[i].second);
      BigInt      after = w.rest[i + 1].second;
      BigInt&     before = i == 0 ? w.head : w.rest[i - 1].second;
      before += value + after;
      w.rest.erase(w.rest.begin() + static_cast<std::ptrdiff_t>(i),
                   w.rest.begin() + static_cast<std::ptrdiff_t>(i + 2));
    }
    return collect(p, q, w);
  }

  std::string britton_str(BrittonForm const& f) {
    std::string out;
    auto        add = [&out](std::string const& s) {
      if (!out.empty()) {
        out += ' ';
      }
      out += s;
    };
    for (auto const& s : f.syllables) {
      if (s.a != 0) {
        add("a^" + std::to_string(s.a));
      }
      add(s.eps == 1 ? "t" : "t'");
    }
    if (f.tail != 0) {
      add("a^" + f.tail.str());
    }
    return out.empty() ? "e" : out;
  }

  CayleyBall::CayleyBall(OraclePtr oracle, std::size_t cap)
      : _oracle(std::move(oracle)), _cap(cap) {
    auto e = _oracle->identity();
    _index.emplace(e.key, 0);
    _elements.push_back(std::move(e));
    _dist.push_back(0);
    _parent.push_back(-1);
    _via.push_back(0);
  }

  void CayleyBall::grow_to(int radius) {
    auto const n = static_cast<Symbol>(_oracle->generators()->size());
    while (_radius < radius) {
      std::size_t end = _elements.size();
      for (std::size_t i = _frontier; i < end; ++i) {
        for (Symbol s = 0; s < n; ++s) {
          auto g = _oracle->act(_elements[i], s);
          if (_index.count(g.key) != 0) {
            continue;
          }
          if (_elements.size() >= _cap) {
            throw CapExceeded("BFS ball exceeded " + std::to_string(_cap) + " elements at radius "
                              + std::to_string(_radius + 1));
          }
          _index.emplace(g.key, _elements.size());
          _elements.push_back(std::move(g));
          _dist.push_back(_radius + 1);
          _parent.push_back(static_cast<int>(i));
          _via.push_back(s);
        }
      }
      _frontier = end;
      ++_radius;
    }
  }

  std::optional<int> CayleyBall::distance(OracleElement const& g) const {
    auto it = _index.find(g.key);
    if (it == _index.end()) {
      return std::nullopt;
    }
    return _dist[it->second];
  }

  std::optional<Word> CayleyBall::geodesic(OracleElement const& g) const {
    auto it = _index.find(g.key);
    if (it == _index.end()) {
      return std::nullopt;
    }
    std::vector<Symbol> rev;
    for (int i = static_cast<int>(it->second); _parent[static_cast<std::size_t>(i)] >= 0;
         i = _parent[static_cast<std::size_t>(i)]) {
      rev.push_back(_via[static_cast<std::size_t>(i)]);
    }
    std::reverse(rev.begin(), rev.end());
    return Word(_oracle->generators(), std::move(rev));
  }

  std::string CayleyBall::tsv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < _elements.size(); ++i) {
      os << _elements[i].key << '\t' << _dist[i] << '\n';
    }
    return os.str();
  }

  CayleyBall bfs_ball(OraclePtr oracle, int radius, std::size_t cap) {
    if (radius < 0) {
      throw UsageError("negative BFS radius");
    }
    CayleyBall b(std::move(oracle), cap);
    b.grow_to(radius);
    return b;
  }

  std::optional<int> word_distance(CayleyBall& ball, OracleElement const& g,
                                   OracleElement const& h, int max_radius) {
    if (g == h) {
      return 0;
    }
    auto const& o = ball.oracle();
    if (auto gi = o.inverse(g)) {
      if (auto x = o.multiply(*gi, h)) {
        for (;;) {
          if (auto d = ball.distance(*x)) {
            return d;
          }
          if (ball.radius() >= max_radius) {
            return std::nullopt;
          }
          ball.grow_to(ball.radius() + 1);
        }
      }
    }
    // no group operations: breadth-first search from g
    std::unordered_map<std::string, int> seen{{g.key, 0}};
    std::vector<OracleElement>           layer{g};
    auto const n = static_cast<Symbol>(o.generators()->size());
    for (int d = 1; d <= max_radius; ++d) {
      std::vector<OracleElement> next;
      for (auto const& x : layer) {
        for (Symbol s = 0; s < n; ++s) {
          auto y = o.act(x, s);
          if (y == h) {
            return d;
          }
          if (seen.emplace(y.key, d).second) {
            next.push_back(std::move(y));
          }
        }
      }
      layer.swap(next);
    }
    return std::nullopt;
  }

}  // namespace cayley
