#include "cayley/representation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "cayley/errors.hpp"

namespace cayley {

  namespace {
    std::string toggle_name(std::string const& n) {
      if (!n.empty() && n.back() == '\'') {
        return n.substr(0, n.size() - 1);
      }
      return n + "'";
    }

    std::string backend_name(MultiplierFn::Backend b) {
      switch (b) {
        case MultiplierFn::Backend::Transducer: return "transducer";
        case MultiplierFn::Backend::Tm: return "tm";
        case MultiplierFn::Backend::Native: return "native";
        case MultiplierFn::Backend::Composed: return "composed";
      }
      return "?";
    }
  }  // namespace

  GeneratorSet GeneratorSet::from_names(std::vector<std::string> const& names,
                                        std::vector<std::string> const& self_inverse) {
    std::vector<std::string> all;
    std::vector<Symbol>      inv;
    for (auto const& n : names) {
      bool self = std::find(self_inverse.begin(), self_inverse.end(), n) != self_inverse.end();
      auto i    = static_cast<Symbol>(all.size());
      all.push_back(n);
      if (self) {
        inv.push_back(i);
      } else {
        all.push_back(n + "'");
        inv.push_back(i + 1);
        inv.push_back(i);
      }
    }
    return GeneratorSet{Alphabet::make(std::move(all)), std::move(inv)};
  }

  GeneratorSet GeneratorSet::from_alphabet(AlphabetPtr symbols) {
    GeneratorSet g{symbols, {}};
    for (Symbol s = 0; s < symbols->size(); ++s) {
      auto p = symbols->find(toggle_name(symbols->name(s)));
      g.inverse.push_back(p ? *p : s);
    }
    return g;
  }

  Word GeneratorSet::invert(Word const& w) const {
    Word r(symbols);
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
      r.push_back(inverse.at(*it));
    }
    return r;
  }

  std::string to_string(LanguageClass c) {
    switch (c) {
      case LanguageClass::REG: return "REG";
      case LanguageClass::ONE_COUNTER: return "ONE_COUNTER";
      case LanguageClass::DCFL: return "DCFL";
      case LanguageClass::RE: return "RE";
    }
    return "?";
  }

  std::string to_string(TimeClass c) {
    return c == TimeClass::PfLinear ? "pf-linear" : "polynomial";
  }

  std::string to_string(Membership m) {
    switch (m) {
      case Membership::In: return "in";
      case Membership::Out: return "out";
      case Membership::Unknown: return "unknown";
    }
    return "?";
  }

  Membership LanguageSpec::check(Word const& w) const {
    if (dfa) {
      return dfa->accepts(w) ? Membership::In : Membership::Out;
    }
    if (member) {
      return member(w);
    }
    return Membership::Unknown;
  }

  MultiplierFn MultiplierFn::transducer(std::shared_ptr<SyncTransducer const> t) {
    MultiplierFn f;
    f._backend     = Backend::Transducer;
    f._k           = static_cast<std::uint64_t>(bounded_difference_constant(*t));
    f._budget      = TimeBudget::pf_linear(1, *f._k);
    f._description = "transducer(" + std::to_string(t->state_count()) + " states)";
    f._transducer  = std::move(t);
    return f;
  }

  MultiplierFn MultiplierFn::tm(std::shared_ptr<PfProgram const> p, TimeBudget budget,
                                std::optional<std::uint64_t> k) {
    MultiplierFn f;
    f._backend = Backend::Tm;
    f._budget  = std::move(budget);
    f._k       = k;
    f._description = "tm(" + p->name() + ")";
    f._program     = std::move(p);
    return f;
  }

  MultiplierFn MultiplierFn::native(std::string description, NativeFn fn, TimeBudget budget,
                                    std::optional<std::uint64_t> k) {
    MultiplierFn f;
    f._backend     = Backend::Native;
    f._native      = std::move(fn);
    f._budget      = std::move(budget);
    f._k           = k;
    f._description = "native(" + description + ")";
    return f;
  }

  MultiplierFn MultiplierFn::composed(std::vector<MultiplierFn> parts) {
    if (parts.empty()) {
      throw UsageError("composition of zero multipliers");
    }
    if (parts.size() == 1) {
      return parts.front();
    }
    MultiplierFn f;
    f._backend = Backend::Composed;
    std::optional<std::uint64_t> k = 0;
    std::optional<std::uint64_t> growth = 0;
    std::vector<TimeBudget>      budgets;
    std::string                  desc;
    for (auto const& p : parts) {
      budgets.push_back(p.budget());
      if (k && p.k()) {
        *k += *p.k();
        *growth = std::max(*growth, *p.k());
      } else {
        k.reset();
        growth.reset();
      }
      desc += (desc.empty() ? "" : " ; ") + p.describe();
    }
    f._k           = k;
    f._budget      = TimeBudget::composed(std::move(budgets), growth);
    f._description = "compose(" + desc + ")";
    f._parts       = std::move(parts);
    return f;
  }

  MultiplyResult MultiplierFn::apply(Word const& w) const {
    switch (_backend) {
      case Backend::Transducer: {
        auto ev = evaluate(*_transducer, w);
        return {std::move(ev.output), ev.steps};
      }
      case Backend::Tm: {
        auto r = run(*_program, w, _budget);
        return {std::move(r.output), r.steps};
      }
      case Backend::Native: {
        std::uint64_t steps = 0;
        Word          out   = _native(w, steps);
        if (steps > _budget(w.size())) {
          throw BudgetExceeded(_description + ": " + std::to_string(steps) + " steps exceed budget "
                               + std::to_string(_budget(w.size())) + " at n = "
                               + std::to_string(w.size()));
        }
        return {std::move(out), steps};
      }
      case Backend::Composed: {
        MultiplyResult r{w, 0};
        for (auto const& p : _parts) {
          auto s = p.apply(r.word);
          r.word = std::move(s.word);
          r.steps += s.steps;
        }
        return r;
      }
    }
    throw UsageError("bad multiplier backend");
  }

  std::optional<std::pair<std::uint64_t, std::uint64_t>> MultiplierFn::linear_constants() const {
    return _budget.linear_constants();
  }

  std::string MultiplierFn::describe() const {
    return _description;
  }

  void CayleyRep::finalize() {
    std::optional<std::uint64_t> k = 0;
    for (auto const& m : multipliers) {
      if (k && m.k()) {
        k = std::max(*k, *m.k());
      } else {
        k.reset();
      }
    }
    if (k) {
      constants.K = k;
    }
    if (time_class == TimeClass::PfLinear) {
      std::uint64_t c1 = 0, c0 = 0;
      for (auto const& m : multipliers) {
        auto lc = m.linear_constants();
        if (!lc) {
          throw UsageError(name + ": pf-linear representation with a non-linear multiplier");
        }
        c1 = std::max(c1, lc->first);
        c0 = std::max(c0, lc->second);
      }
      constants.C1 = c1;
      constants.C0 = c0;
      if (constants.K) {
        std::uint64_t u0 = identity.size();
        constants.C2     = 2 + c1 * u0 + (c1 * *constants.K + 1) / 2 + c0;
        if (!quasigeodesic_c) {
          quasigeodesic_c = static_cast<double>(std::max<std::uint64_t>(*constants.K, u0));
        }
      }
    }
    constants.C = quasigeodesic_c;
  }

  void CayleyRep::validate() const {
    if (!sigma || !gens.symbols) {
      throw UsageError(name + ": missing alphabet");
    }
    if (multipliers.size() != gens.size() || gens.inverse.size() != gens.size()) {
      throw UsageError(name + ": one multiplier per generator required");
    }
    for (Symbol s = 0; s < gens.size(); ++s) {
      auto t = gens.inverse[s];
      if (t >= gens.size() || gens.inverse[t] != s) {
        throw UsageError(name + ": generator inverse pairing is not an involution");
      }
    }
    if (!same_alphabet(identity.alphabet(), sigma)) {
      throw UsageError(name + ": identity word over the wrong alphabet");
    }
    if (language.check(identity) == Membership::Out) {
      throw UsageError(name + ": identity word not in the language");
    }
    if (time_class == TimeClass::PfLinear) {
      for (auto const& m : multipliers) {
        if (!m.budget().is_pf_linear()) {
          throw UsageError(name + ": pf-linear class with non-linear budget " + m.describe());
        }
      }
    }
  }

  std::pair<Word, StepReport> multiply_by_generator(CayleyRep const& rep, Word const& w, Symbol s,
                                                    bool check_membership) {
    if (s >= rep.multipliers.size()) {
      throw UsageError("generator out of range");
    }
    if (!same_alphabet(w.alphabet(), rep.sigma)) {
      throw UsageError("word is not over the representation alphabet");
    }
    if (check_membership && rep.language.check(w) == Membership::Out) {
      throw MembershipError("'" + w.str() + "' is not a normal form of " + rep.name);
    }
    auto       r = rep.multipliers[s].apply(w);
    StepReport rp;
    rp.input_length = w.size();
    rp.multiplier_steps.push_back(r.steps);
    rp.total = r.steps;
    return {std::move(r.word), rp};
  }

  NormalFormResult normal_form(CayleyRep const& rep, Word const& v, NormalFormOptions opt) {
    if (!same_alphabet(v.alphabet(), rep.gens.symbols)) {
      throw UsageError("word is not over the generators of " + rep.name);
    }
    NormalFormResult res{rep.identity, {}};
    auto&            rp = res.report;
    if (rep.time_class == TimeClass::Polynomial && !rep.quasigeodesic_c) {
      if (opt.strict) {
        throw UnsupportedError(rep.name
                               + ": polynomial representation without quasigeodesic constant");
      }
      rp.bounded = false;
    }
    rp.input_length = v.size();
    for (std::size_t j = 1; j <= v.size(); ++j) {
      rp.fetch_steps += 2 * j;
      auto r   = rep.multipliers[v[j - 1]].apply(res.word);
      res.word = std::move(r.word);
      rp.multiplier_steps.push_back(r.steps);
      rp.total += r.steps;
    }
    rp.total += rp.fetch_steps;
    return res;
  }

  bool word_problem(CayleyRep const& rep, Word const& v, NormalFormOptions opt) {
    return normal_form(rep, v, opt).word.letters() == rep.identity.letters();
  }

  NormalFormEnumerator::NormalFormEnumerator(RepPtr rep, int radius)
      : _rep(std::move(rep)), _radius(radius) {}

  std::optional<Word> NormalFormEnumerator::next() {
    if (!_started) {
      _started = true;
      _seen.insert(_rep->identity.letters());
      _current.push_back(_rep->identity);
      return _rep->identity;
    }
    auto const n = static_cast<Symbol>(_rep->gens.size());
    while (_layer < _radius) {
      if (_pos == _current.size()) {
        if (_next.empty()) {
          break;
        }
        _current.swap(_next);
        _next.clear();
        ++_layer;
        _pos = 0;
        _gen = 0;
        continue;
      }
      auto w = _rep->multipliers[_gen].apply(_current[_pos]).word;
      if (++_gen == n) {
        _gen = 0;
        ++_pos;
      }
      if (!_seen.insert(w.letters()).second) {
        continue;
      }
      _next.push_back(w);
      _depth = _layer + 1;
      return w;
    }
    return std::nullopt;
  }

  std::vector<Word> enumerate_normal_forms(RepPtr rep, int radius) {
    NormalFormEnumerator e(std::move(rep), radius);
    std::vector<Word>    out;
    while (auto w = e.next()) {
      out.push_back(std::move(*w));
    }
    return out;
  }

  Word generator_word(CayleyRep const& rep, std::string_view text) {
    return Word::parse(rep.gens.symbols, text);
  }

  Word normal_word(CayleyRep const& rep, std::string_view text) {
    return Word::parse(rep.sigma, text);
  }

  RepPtr change_generators(RepPtr rep,
                           std::vector<std::pair<std::string, std::string>> const& gens) {
    std::vector<std::string> names;
    std::vector<Word>        words;
    auto                     have = [&](std::string const& n) {
      return std::find(names.begin(), names.end(), n) != names.end();
    };
    for (auto const& [n, text] : gens) {
      if (have(n)) {
        throw UsageError("duplicate generator '" + n + "'");
      }
      auto w = generator_word(*rep, text);
      if (w.empty()) {
        throw UsageError("generator '" + n + "' has an empty defining word");
      }
      names.push_back(n);
      words.push_back(std::move(w));
    }
    // Partners not supplied explicitly are the inverse words.
    for (std::size_t i = 0, m = names.size(); i < m; ++i) {
      auto partner = toggle_name(names[i]);
      if (!have(partner)) {
        names.push_back(partner);
        words.push_back(rep->gens.invert(words[i]));
      }
    }
    auto out  = std::make_shared<CayleyRep>(*rep);
    out->gens = GeneratorSet::from_alphabet(Alphabet::make(names));
    out->multipliers.clear();
    for (auto const& w : words) {
      std::vector<MultiplierFn> parts;
      for (auto s : w) {
        parts.push_back(rep->multipliers[s]);
      }
      out->multipliers.push_back(MultiplierFn::composed(std::move(parts)));
    }
    out->oracle          = subgroup_oracle(rep->oracle, out->gens.symbols, words);
    out->quasigeodesic_c = std::nullopt;
    out->constants       = {};
    out->finalize();
    out->validate();
    return out;
  }

  std::string manifest_json(CayleyRep const& rep) {
    nlohmann::ordered_json j;
    j["name"]         = rep.name;
    j["alphabet"]     = rep.sigma->is_product() ? nlohmann::ordered_json("product")
                                                : nlohmann::ordered_json(rep.sigma->names());
    if (rep.sigma->is_product()) {
      nlohmann::ordered_json tracks = nlohmann::ordered_json::array();
      for (auto const& t : rep.sigma->tracks()) {
        tracks.push_back(t->names());
      }
      j["alphabetTracks"] = tracks;
    }
    j["classTag"]     = to_string(rep.language.cls);
    j["timeClass"]    = to_string(rep.time_class);
    j["identityWord"] = rep.identity.str();
    nlohmann::ordered_json gens = nlohmann::ordered_json::array();
    nlohmann::ordered_json back = nlohmann::ordered_json::object();
    for (Symbol s = 0; s < rep.gens.size(); ++s) {
      auto n = rep.gens.symbols->name(s);
      gens.push_back({{"name", n}, {"inverse", rep.gens.symbols->name(rep.gens.inverse[s])}});
      auto const& m = rep.multipliers[s];
      back[n] = {{"backend", backend_name(m.backend())},
                 {"description", m.describe()},
                 {"budget", m.budget().describe()}};
    }
    j["generators"]         = gens;
    j["multiplierBackends"] = back;
    auto opt = [](auto const& v) {
      return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    j["constants"] = {{"K", opt(rep.constants.K)},
                      {"C", opt(rep.constants.C)},
                      {"C1", opt(rep.constants.C1)},
                      {"C0", opt(rep.constants.C0)},
                      {"C2", opt(rep.constants.C2)}};
    return j.dump(2);
  }

}  // namespace cayley
