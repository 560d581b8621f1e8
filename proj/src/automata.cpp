#include "cayley/automata.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "cayley/errors.hpp"

namespace cayley {

  Dfa::Dfa(AlphabetPtr alphabet) : _alphabet(std::move(alphabet)) {
    _sigma = _alphabet->size();
    if (_sigma > (1u << 20)) {
      throw UsageError("alphabet too large for a dense automaton");
    }
  }

  int Dfa::next(int q, Symbol s) const {
    if (q < 0 || s >= _sigma) {
      return -1;
    }
    return _delta[static_cast<std::size_t>(q) * _sigma + s];
  }

  int Dfa::add_state(bool accepting) {
    _accepting.push_back(accepting ? 1 : 0);
    _delta.resize(_delta.size() + _sigma, -1);
    return state_count() - 1;
  }

  void Dfa::set_start(int q) {
    _start = q;
  }

  void Dfa::set_accepting(int q, bool value) {
    _accepting.at(static_cast<std::size_t>(q)) = value ? 1 : 0;
  }

  void Dfa::set_transition(int from, Symbol s, int to) {
    if (!_alphabet->contains(s)) {
      throw UsageError("transition on a symbol outside the alphabet");
    }
    if (from < 0 || from >= state_count() || to < 0 || to >= state_count()) {
      throw UsageError("transition references a missing state");
    }
    _delta[static_cast<std::size_t>(from) * _sigma + s] = to;
  }

  int Dfa::run(int q, std::span<Symbol const> w) const {
    for (auto s : w) {
      q = next(q, s);
      if (q < 0) {
        return -1;
      }
    }
    return q;
  }

  bool Dfa::accepts(std::span<Symbol const> w) const {
    if (state_count() == 0) {
      return false;
    }
    int q = run(_start, w);
    return q >= 0 && accepting(q);
  }

  std::size_t Dfa::transition_count() const {
    return static_cast<std::size_t>(
        std::count_if(_delta.begin(), _delta.end(), [](std::int32_t t) { return t >= 0; }));
  }

  std::vector<Symbol> Dfa::used_symbols() const {
    std::vector<std::uint8_t> seen(_sigma, 0);
    for (std::size_t i = 0; i < _delta.size(); ++i) {
      if (_delta[i] >= 0) {
        seen[i % _sigma] = 1;
      }
    }
    std::vector<Symbol> out;
    for (std::size_t s = 0; s < _sigma; ++s) {
      if (seen[s]) {
        out.push_back(static_cast<Symbol>(s));
      }
    }
    return out;
  }

  Dfa Dfa::trimmed() const {
    int n = state_count();
    Dfa out(_alphabet);
    if (n == 0) {
      return out;
    }
    std::vector<std::uint8_t> reach(static_cast<std::size_t>(n), 0), coreach(reach);
    std::vector<std::vector<int>> rev(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      for (std::size_t s = 0; s < _sigma; ++s) {
        int t = _delta[static_cast<std::size_t>(q) * _sigma + s];
        if (t >= 0) {
          rev[static_cast<std::size_t>(t)].push_back(q);
        }
      }
    }
    std::vector<int> stack{_start};
    reach[static_cast<std::size_t>(_start)] = 1;
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (std::size_t s = 0; s < _sigma; ++s) {
        int t = _delta[static_cast<std::size_t>(q) * _sigma + s];
        if (t >= 0 && !reach[static_cast<std::size_t>(t)]) {
          reach[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
      }
    }
    for (int q = 0; q < n; ++q) {
      if (accepting(q)) {
        coreach[static_cast<std::size_t>(q)] = 1;
        stack.push_back(q);
      }
    }
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int p : rev[static_cast<std::size_t>(q)]) {
        if (!coreach[static_cast<std::size_t>(p)]) {
          coreach[static_cast<std::size_t>(p)] = 1;
          stack.push_back(p);
        }
      }
    }
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    for (int q = 0; q < n; ++q) {
      if (reach[static_cast<std::size_t>(q)] && coreach[static_cast<std::size_t>(q)]) {
        map[static_cast<std::size_t>(q)] = out.add_state(accepting(q));
      }
    }
    if (map[static_cast<std::size_t>(_start)] < 0) {
      // empty language: a single non-accepting start state
      out.add_state(false);
      out.set_start(0);
      return out;
    }
    out.set_start(map[static_cast<std::size_t>(_start)]);
    for (int q = 0; q < n; ++q) {
      if (map[static_cast<std::size_t>(q)] < 0) {
        continue;
      }
      for (std::size_t s = 0; s < _sigma; ++s) {
        int t = _delta[static_cast<std::size_t>(q) * _sigma + s];
        if (t >= 0 && map[static_cast<std::size_t>(t)] >= 0) {
          out._delta[static_cast<std::size_t>(map[static_cast<std::size_t>(q)]) * _sigma + s]
              = map[static_cast<std::size_t>(t)];
        }
      }
    }
    return out;
  }

  Dfa Dfa::minimized() const {
    Dfa  t       = trimmed();
    int  n       = t.state_count();
    auto symbols = t.used_symbols();
    int  sink    = n;
    // class ids of the completed automaton, sink included
    std::vector<int> cls(static_cast<std::size_t>(n + 1));
    for (int q = 0; q < n; ++q) {
      cls[static_cast<std::size_t>(q)] = t.accepting(q) ? 1 : 0;
    }
    cls[static_cast<std::size_t>(sink)] = 0;
    std::size_t classes = 0;
    for (;;) {
      std::map<std::vector<int>, int> sig_ids;
      std::vector<int>                fresh(cls.size());
      for (int q = 0; q <= n; ++q) {
        std::vector<int> sig{cls[static_cast<std::size_t>(q)]};
        for (auto s : symbols) {
          int to = q == sink ? sink : t.next(q, s);
          sig.push_back(cls[static_cast<std::size_t>(to < 0 ? sink : to)]);
        }
        auto [it, _] = sig_ids.try_emplace(std::move(sig), static_cast<int>(sig_ids.size()));
        fresh[static_cast<std::size_t>(q)] = it->second;
      }
      cls.swap(fresh);
      if (sig_ids.size() == classes) {
        break;
      }
      classes = sig_ids.size();
    }
    int              sink_cls = cls[static_cast<std::size_t>(sink)];
    Dfa              out(_alphabet);
    std::vector<int> id(classes, -1);
    for (int q = 0; q < n; ++q) {
      int c = cls[static_cast<std::size_t>(q)];
      if (c != sink_cls && id[static_cast<std::size_t>(c)] < 0) {
        id[static_cast<std::size_t>(c)] = out.add_state(t.accepting(q));
      }
    }
    if (n == 0 || cls[static_cast<std::size_t>(t.start())] == sink_cls) {
      Dfa empty(_alphabet);
      empty.add_state(false);
      return empty;
    }
    out.set_start(id[static_cast<std::size_t>(cls[static_cast<std::size_t>(t.start())])]);
    for (int q = 0; q < n; ++q) {
      int c = cls[static_cast<std::size_t>(q)];
      if (c == sink_cls) {
        continue;
      }
      for (auto s : symbols) {
        int to = t.next(q, s);
        if (to >= 0 && cls[static_cast<std::size_t>(to)] != sink_cls) {
          out._delta[static_cast<std::size_t>(id[static_cast<std::size_t>(c)]) * _sigma + s]
              = id[static_cast<std::size_t>(cls[static_cast<std::size_t>(to)])];
        }
      }
    }
    return out.canonical();
  }

  Dfa Dfa::canonical() const {
    Dfa out(_alphabet);
    if (state_count() == 0) {
      return out;
    }
    std::vector<int> map(static_cast<std::size_t>(state_count()), -1);
    std::deque<int>  queue{_start};
    map[static_cast<std::size_t>(_start)] = out.add_state(accepting(_start));
    while (!queue.empty()) {
      int q = queue.front();
      queue.pop_front();
      for (std::size_t s = 0; s < _sigma; ++s) {
        int to = _delta[static_cast<std::size_t>(q) * _sigma + s];
        if (to < 0) {
          continue;
        }
        if (map[static_cast<std::size_t>(to)] < 0) {
          map[static_cast<std::size_t>(to)] = out.add_state(accepting(to));
          queue.push_back(to);
        }
        out._delta[static_cast<std::size_t>(map[static_cast<std::size_t>(q)]) * _sigma + s]
            = map[static_cast<std::size_t>(to)];
      }
    }
    out.set_start(0);
    return out;
  }

  bool Dfa::operator==(Dfa const& other) const {
    return same_alphabet(_alphabet, other._alphabet) && _start == other._start
           && _accepting == other._accepting && _delta == other._delta;
  }

  bool Dfa::isomorphic(Dfa const& other) const {
    return canonical() == other.canonical();
  }

  Dfa Dfa::relabel(AlphabetPtr alphabet, std::span<Symbol const> map) const {
    if (map.size() != _sigma) {
      throw UsageError("relabel map does not cover the alphabet");
    }
    Dfa out(std::move(alphabet));
    for (int q = 0; q < state_count(); ++q) {
      out.add_state(accepting(q));
    }
    out.set_start(_start);
    for (int q = 0; q < state_count(); ++q) {
      for (std::size_t s = 0; s < _sigma; ++s) {
        int to = _delta[static_cast<std::size_t>(q) * _sigma + s];
        if (to >= 0) {
          out.set_transition(q, map[s], to);
        }
      }
    }
    return out;
  }

  Dfa Dfa::universal(AlphabetPtr alphabet) {
    Dfa d(alphabet);
    d.add_state(true);
    for (std::size_t s = 0; s < d._sigma; ++s) {
      if (alphabet->contains(static_cast<Symbol>(s))) {
        d.set_transition(0, static_cast<Symbol>(s), 0);
      }
    }
    return d;
  }

  Dfa Dfa::single_word(Word const& w) {
    return finite(w.alphabet(), {w});
  }

  Dfa Dfa::finite(AlphabetPtr alphabet, std::vector<Word> const& words) {
    Dfa d(alphabet);
    d.add_state(false);
    for (auto const& w : words) {
      int q = 0;
      for (auto s : w) {
        int to = d.next(q, s);
        if (to < 0) {
          to = d.add_state(false);
          d.set_transition(q, s, to);
        }
        q = to;
      }
      d.set_accepting(q, true);
    }
    return d;
  }

  namespace {
    Dfa product_dfa(Dfa const& a, Dfa const& b, bool need_both) {
    if (!same_alphabet(a.alphabet(), b.alphabet())) {
      throw UsageError("product of automata over different alphabets");
    }
    StateIndexer<std::pair<int, int>>      idx;
    std::vector<std::tuple<int, Symbol, int>> edges;
    std::vector<bool>                      acc;
    idx.id({a.start(), b.start()});
    auto symbols = a.used_symbols();
    auto more    = b.used_symbols();
    symbols.insert(symbols.end(), more.begin(), more.end());
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    while (idx.pending()) {
      int  id     = idx.pop();
      auto [p, q] = idx.state(id);
      bool ap     = p >= 0 && a.accepting(p);
      bool bq     = q >= 0 && b.accepting(q);
      acc.push_back(need_both ? (ap && bq) : (ap || bq));
      for (auto s : symbols) {
        int np = a.next(p, s), nq = b.next(q, s);
        if (need_both ? (np < 0 || nq < 0) : (np < 0 && nq < 0)) {
          continue;
        }
        edges.emplace_back(id, s, idx.id({np, nq}));
      }
    }
    Dfa out(a.alphabet());
    for (bool x : acc) {
      out.add_state(x);
    }
    out.set_start(0);
    for (auto [f, s, t] : edges) {
      out.set_transition(f, s, t);
    }
    return out;
  }
  }  // namespace

  Dfa intersect(Dfa const& a, Dfa const& b) {
    return product_dfa(a, b, true).trimmed();
  }

  Dfa unite(Dfa const& a, Dfa const& b) {
    return product_dfa(a, b, false).trimmed();
  }

  Dfa concatenate_disjoint(Dfa const& a, Dfa const& b) {
    if (!same_alphabet(a.alphabet(), b.alphabet())) {
      throw UsageError("concatenation of automata over different alphabets");
    }
    auto sa = a.used_symbols();
    auto sb = b.used_symbols();
    std::set<Symbol> in_b(sb.begin(), sb.end());
    for (auto s : sa) {
      if (in_b.count(s) != 0) {
        throw UsageError("concatenate_disjoint: symbol sets overlap");
      }
    }
    // state: (phase, q); phase 0 runs a, phase 1 runs b
    int na = a.state_count();
    Dfa out(a.alphabet());
    for (int q = 0; q < na; ++q) {
      out.add_state(a.accepting(q) && b.accepting(b.start()));
    }
    for (int q = 0; q < b.state_count(); ++q) {
      out.add_state(b.accepting(q));
    }
    out.set_start(a.start());
    for (int q = 0; q < na; ++q) {
      for (auto s : sa) {
        int to = a.next(q, s);
        if (to >= 0) {
          out.set_transition(q, s, to);
        }
      }
      if (a.accepting(q)) {
        for (auto s : sb) {
          int to = b.next(b.start(), s);
          if (to >= 0) {
            out.set_transition(q, s, na + to);
          }
        }
      }
    }
    for (int q = 0; q < b.state_count(); ++q) {
      for (auto s : sb) {
        int to = b.next(q, s);
        if (to >= 0) {
          out.set_transition(na + q, s, na + to);
        }
      }
    }
    return out.trimmed();
  }

  Dfa determinize(Nfa const& nfa) {
    StateIndexer<std::vector<int>>            idx;
    std::vector<std::tuple<int, Symbol, int>> edges;
    std::vector<bool>                         acc;
    std::vector<int>                          start = nfa.starts;
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    idx.id(start);
    while (idx.pending()) {
      int  id  = idx.pop();
      auto cur = idx.state(id);
      bool a   = false;
      std::map<Symbol, std::vector<int>> succ;
      for (int q : cur) {
        a = a || nfa.accepting[static_cast<std::size_t>(q)];
        for (auto [s, to] : nfa.edges[static_cast<std::size_t>(q)]) {
          succ[s].push_back(to);
        }
      }
      acc.push_back(a);
      for (auto& [s, set] : succ) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        edges.emplace_back(id, s, idx.id(set));
      }
    }
    Dfa out(nfa.alphabet);
    for (bool x : acc) {
      out.add_state(x);
    }
    out.set_start(0);
    for (auto [f, s, t] : edges) {
      out.set_transition(f, s, t);
    }
    return out;
  }

}  // namespace cayley
