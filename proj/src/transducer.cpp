#include <algorithm>
#include <array>
#include <tuple>

#include <json.hpp>

#include "cayley/automata.hpp"
#include "cayley/errors.hpp"

namespace cayley {

  SyncTransducer::SyncTransducer(AlphabetPtr alphabet, int states, int start,
                                 std::vector<std::uint8_t> accepting,
                                 std::vector<Transition>   transitions)
      : _alphabet(std::move(alphabet)),
        _states(states),
        _start(start),
        _accepting(std::move(accepting)),
        _transitions(std::move(transitions)) {
    if (_alphabet->is_product()) {
      throw UsageError("transducer base alphabet must be explicit");
    }
    _pairs = Alphabet::product({_alphabet, _alphabet});
    if (_states <= 0 || _start < 0 || _start >= _states) {
      throw UsageError("transducer start state out of range");
    }
    if (_accepting.size() != static_cast<std::size_t>(_states)) {
      throw UsageError("accepting flags do not match the state count");
    }
    for (auto const& t : _transitions) {
      if (t.from < 0 || t.from >= _states || t.to < 0 || t.to >= _states) {
        throw UsageError("transition references a missing state");
      }
      if (t.in == kPad && t.out == kPad) {
        throw UsageError("transition labelled (pad, pad)");
      }
      if ((t.in != kPad && !_alphabet->contains(t.in))
          || (t.out != kPad && !_alphabet->contains(t.out))) {
        throw UsageError("transition label outside the alphabet");
      }
    }
    index();
    check_pad_monotone();
    check_functional();
  }

  void SyncTransducer::index() {
    std::sort(_transitions.begin(), _transitions.end(), [this](auto const& a, auto const& b) {
      return std::tuple(a.from, in_index(a.in), a.out, a.to)
             < std::tuple(b.from, in_index(b.in), b.out, b.to);
    });
    _transitions.erase(std::unique(_transitions.begin(), _transitions.end()), _transitions.end());
    std::size_t width = _alphabet->size() + 1;
    _offsets.assign(static_cast<std::size_t>(_states) * width + 1, 0);
    for (auto const& t : _transitions) {
      ++_offsets[static_cast<std::size_t>(t.from) * width + in_index(t.in) + 1];
    }
    for (std::size_t i = 1; i < _offsets.size(); ++i) {
      _offsets[i] += _offsets[i - 1];
    }
  }

  std::span<SyncTransducer::Transition const> SyncTransducer::outgoing(int q, Symbol in) const {
    std::size_t width = _alphabet->size() + 1;
    std::size_t k     = static_cast<std::size_t>(q) * width + in_index(in);
    return {_transitions.data() + _offsets[k], _offsets[k + 1] - _offsets[k]};
  }

  void SyncTransducer::check_pad_monotone() const {
    // node = 4q + 2pu + pv, flags record padding seen on each track
    std::size_t                   n = static_cast<std::size_t>(_states) * 4;
    std::vector<std::uint8_t>     reach(n, 0), coreach(n, 0);
    std::vector<std::vector<int>> rev(n);
    auto                          succ = [](int node, Transition const& t) {
      int pu = ((node >> 1) & 1) | (t.in == kPad ? 1 : 0);
      int pv = (node & 1) | (t.out == kPad ? 1 : 0);
      return t.to * 4 + pu * 2 + pv;
    };
    for (int node = 0; node < static_cast<int>(n); ++node) {
      for (std::size_t i = _offsets[static_cast<std::size_t>(node / 4) * (_alphabet->size() + 1)];
           i < _offsets[static_cast<std::size_t>(node / 4 + 1) * (_alphabet->size() + 1)]; ++i) {
        rev[static_cast<std::size_t>(succ(node, _transitions[i]))].push_back(node);
      }
    }
    std::vector<int> stack{_start * 4};
    reach[static_cast<std::size_t>(_start * 4)] = 1;
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      for (std::size_t i = _offsets[static_cast<std::size_t>(node / 4) * (_alphabet->size() + 1)];
           i < _offsets[static_cast<std::size_t>(node / 4 + 1) * (_alphabet->size() + 1)]; ++i) {
        int to = succ(node, _transitions[i]);
        if (!reach[static_cast<std::size_t>(to)]) {
          reach[static_cast<std::size_t>(to)] = 1;
          stack.push_back(to);
        }
      }
    }
    for (int node = 0; node < static_cast<int>(n); ++node) {
      if (accepting(node / 4)) {
        coreach[static_cast<std::size_t>(node)] = 1;
        stack.push_back(node);
      }
    }
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      for (int p : rev[static_cast<std::size_t>(node)]) {
        if (!coreach[static_cast<std::size_t>(p)]) {
          coreach[static_cast<std::size_t>(p)] = 1;
          stack.push_back(p);
        }
      }
    }
    for (int node = 0; node < static_cast<int>(n); ++node) {
      if (!reach[static_cast<std::size_t>(node)]) {
        continue;
      }
      bool pu = (node >> 1) & 1, pv = node & 1;
      for (std::size_t i = _offsets[static_cast<std::size_t>(node / 4) * (_alphabet->size() + 1)];
           i < _offsets[static_cast<std::size_t>(node / 4 + 1) * (_alphabet->size() + 1)]; ++i) {
        auto const& t = _transitions[i];
        if (((pu && t.in != kPad) || (pv && t.out != kPad))
            && coreach[static_cast<std::size_t>(succ(node, t))]) {
          throw UsageError("transducer accepts a run with non-monotone padding (state "
                           + std::to_string(t.from) + ")");
        }
      }
    }
  }

  void SyncTransducer::check_functional() const {
    // Square construction: two runs on a shared input track. fin marks a run
    // that has already accepted; the other may only continue on padded input.
    int const fin   = _states;
    int const side  = _states + 1;
    auto      code  = [side](int a, int b, int d) { return (a * side + b) * 2 + d; };
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(side * side * 2), 0);
    std::vector<int>          stack;
    auto                      push = [&](int a, int b, int d) {
      int c = code(a, b, d);
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = 1;
        stack.push_back(c);
      }
    };
    push(_start, _start, 0);
    std::size_t width = _alphabet->size() + 1;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      int d = c % 2;
      int b = (c / 2) % side;
      int a = (c / 2) / side;
      if (a == fin && b == fin) {
        if (d) {
          throw FunctionalityError("transducer relates one input to two outputs");
        }
        continue;
      }
      if (a != fin && accepting(a)) {
        push(fin, b, d);
      }
      if (b != fin && accepting(b)) {
        push(a, fin, d);
      }
      if (a != fin && b != fin) {
        for (std::size_t x = 0; x < width; ++x) {
          Symbol in = x == _alphabet->size() ? kPad : static_cast<Symbol>(x);
          for (auto const& t1 : outgoing(a, in)) {
            for (auto const& t2 : outgoing(b, in)) {
              push(t1.to, t2.to, d | (t1.out != t2.out ? 1 : 0));
            }
          }
        }
      } else if (a == fin) {
        for (auto const& t : outgoing(b, kPad)) {
          push(fin, t.to, 1);
        }
      } else {
        for (auto const& t : outgoing(a, kPad)) {
          push(t.to, fin, 1);
        }
      }
      (void)width;
    }
  }

  bool SyncTransducer::accepts(Word const& u, Word const& v) const {
    auto             cells = convolve(u, v);
    std::vector<int> cur{_start}, nxt;
    std::vector<std::uint8_t> mark(static_cast<std::size_t>(_states), 0);
    for (auto const& [x, y] : cells.cells()) {
      nxt.clear();
      for (int q : cur) {
        for (auto const& t : outgoing(q, x)) {
          if (t.out == y && !mark[static_cast<std::size_t>(t.to)]) {
            mark[static_cast<std::size_t>(t.to)] = 1;
            nxt.push_back(t.to);
          }
        }
      }
      for (int q : nxt) {
        mark[static_cast<std::size_t>(q)] = 0;
      }
      cur.swap(nxt);
    }
    return std::any_of(cur.begin(), cur.end(), [this](int q) { return accepting(q); });
  }

  Nfa SyncTransducer::pair_nfa() const {
    Nfa nfa;
    nfa.alphabet = _pairs;
    for (int q = 0; q < _states; ++q) {
      nfa.add_state(accepting(q));
    }
    nfa.starts = {_start};
    for (auto const& t : _transitions) {
      std::array<Symbol, 2> parts{t.in, t.out};
      nfa.edges[static_cast<std::size_t>(t.from)].emplace_back(_pairs->compose(parts), t.to);
    }
    return nfa;
  }

  SyncTransducer SyncTransducer::from_pair_dfa(AlphabetPtr alphabet, Dfa const& pairs) {
    auto expected = Alphabet::product({alphabet, alphabet});
    if (!same_alphabet(expected, pairs.alphabet())) {
      throw UsageError("pair automaton is not over the convolution alphabet");
    }
    std::vector<Transition>   ts;
    std::vector<std::uint8_t> acc;
    for (int q = 0; q < pairs.state_count(); ++q) {
      acc.push_back(pairs.accepting(q) ? 1 : 0);
      for (Symbol s = 0; s < expected->size(); ++s) {
        int to = pairs.next(q, s);
        if (to >= 0) {
          auto parts = expected->components(s);
          ts.push_back({q, parts[0], parts[1], to});
        }
      }
    }
    if (pairs.state_count() == 0) {
      acc.push_back(0);
      return SyncTransducer(alphabet, 1, 0, acc, {});
    }
    return SyncTransducer(alphabet, pairs.state_count(), pairs.start(), std::move(acc),
                          std::move(ts));
  }

  Evaluation evaluate(SyncTransducer const& t, Word const& u) {
    if (!same_alphabet(u.alphabet(), t.alphabet())) {
      throw UsageError("evaluate: word over a different alphabet");
    }
    std::size_t const n   = u.size();
    std::size_t const cap = n + static_cast<std::size_t>(t.state_count());
    // Layered forward exploration of nodes 2q + vpad, then backward liveness.
    struct Edge {
      std::uint32_t to;
      Symbol        out;
    };
    std::vector<std::vector<int>>         layers{{t.start() * 2}};
    std::vector<std::vector<std::size_t>> edge_begin;
    std::vector<Edge>                     edges;
    std::vector<int>                      slot(static_cast<std::size_t>(t.state_count()) * 2, -1);
    for (std::size_t i = 0; i < cap && !layers.back().empty(); ++i) {
      Symbol           x = i < n ? u[i] : kPad;
      std::vector<int> next;
      auto&            begins = edge_begin.emplace_back();
      for (int node : layers[i]) {
        begins.push_back(edges.size());
        bool vp = node & 1;
        if (vp && i >= n) {
          continue;
        }
        for (auto const& tr : t.outgoing(node / 2, x)) {
          if (vp && tr.out != kPad) {
            continue;
          }
          int to = tr.to * 2 + (tr.out == kPad ? 1 : 0);
          if (slot[static_cast<std::size_t>(to)] < 0) {
            slot[static_cast<std::size_t>(to)] = static_cast<int>(next.size());
            next.push_back(to);
          }
          edges.push_back({static_cast<std::uint32_t>(slot[static_cast<std::size_t>(to)]), tr.out});
        }
      }
      begins.push_back(edges.size());
      for (int node : next) {
        slot[static_cast<std::size_t>(node)] = -1;
      }
      layers.push_back(std::move(next));
    }
    auto final_at = [&](std::size_t i, int node) { return i >= n && t.accepting(node / 2); };
    std::size_t depth = layers.size();
    std::vector<std::vector<std::uint8_t>> live(depth);
    for (std::size_t i = depth; i-- > 0;) {
      live[i].assign(layers[i].size(), 0);
      for (std::size_t j = 0; j < layers[i].size(); ++j) {
        bool ok = final_at(i, layers[i][j]);
        if (!ok && i < edge_begin.size()) {
          for (std::size_t e = edge_begin[i][j]; e < edge_begin[i][j + 1] && !ok; ++e) {
            ok = live[i + 1][edges[e].to] != 0;
          }
        }
        live[i][j] = ok ? 1 : 0;
      }
    }
    if (!live[0][0]) {
      throw DomainError("input '" + u.str() + "' is outside the transducer's domain");
    }
    Word                     out(t.alphabet());
    std::vector<std::size_t> cur{0}, nxt;
    std::vector<std::uint8_t> mark;
    for (std::size_t i = 0;; ++i) {
      bool   can_stop = false;
      bool   have     = false;
      Symbol choice   = 0;
      for (auto j : cur) {
        can_stop = can_stop || final_at(i, layers[i][j]);
        if (i >= edge_begin.size()) {
          continue;
        }
        for (std::size_t e = edge_begin[i][j]; e < edge_begin[i][j + 1]; ++e) {
          if (!live[i + 1][edges[e].to]) {
            continue;
          }
          if (have && edges[e].out != choice) {
            throw FunctionalityError("two outputs for input '" + u.str() + "'");
          }
          have   = true;
          choice = edges[e].out;
        }
      }
      if (can_stop && have) {
        throw FunctionalityError("two outputs for input '" + u.str() + "'");
      }
      if (can_stop) {
        return {std::move(out), i};
      }
      if (!have) {
        throw DomainError("transducer run died on '" + u.str() + "'");
      }
      if (choice != kPad) {
        out.letters().push_back(choice);
      }
      mark.assign(layers[i + 1].size(), 0);
      nxt.clear();
      for (auto j : cur) {
        for (std::size_t e = edge_begin[i][j]; e < edge_begin[i][j + 1]; ++e) {
          auto to = edges[e].to;
          if (edges[e].out == choice && live[i + 1][to] && !mark[to]) {
            mark[to] = 1;
            nxt.push_back(to);
          }
        }
      }
      cur.swap(nxt);
    }
  }

  int bounded_difference_constant(SyncTransducer const& t) {
    return t.state_count();
  }

  Dfa relation_automaton(SyncTransducer const& t, Dfa const& lang) {
    if (!same_alphabet(lang.alphabet(), t.alphabet())) {
      throw UsageError("relation_automaton: language and transducer alphabets differ");
    }
    // Accepted runs of t are pad monotone, so the language state freezes at
    // the first padded input cell.
    Nfa nfa;
    nfa.alphabet = t.pair_alphabet();
    StateIndexer<std::pair<int, int>> idx;
    std::vector<std::vector<std::pair<Symbol, int>>> edges;
    idx.id({lang.start(), t.start()});
    std::vector<std::uint8_t> acc;
    while (idx.pending()) {
      int  id     = idx.pop();
      auto [l, q] = idx.state(id);
      acc.push_back(lang.accepting(l) && t.accepting(q) ? 1 : 0);
      edges.emplace_back();
      for (auto const& tr : t.transitions()) {
        if (tr.from != q) {
          continue;
        }
        int nl = l;
        if (tr.in != kPad) {
          nl = lang.next(l, tr.in);
          if (nl < 0) {
            continue;
          }
        } else if (!lang.accepting(l)) {
          continue;
        }
        std::array<Symbol, 2> parts{tr.in, tr.out};
        int                   to = idx.id({nl, tr.to});
        edges[static_cast<std::size_t>(id)].emplace_back(nfa.alphabet->compose(parts), to);
      }
    }
    nfa.accepting = std::move(acc);
    nfa.edges     = std::move(edges);
    nfa.starts    = {0};
    return determinize(nfa).minimized();
  }

  namespace {
    struct Verifier {
      SequentialMachine::State seq;
      std::vector<Symbol>      produced;  // emitted by the machine, not yet written
      std::vector<Symbol>      written;   // written ahead of the machine
      bool                     in_done  = false;
      bool                     out_done = false;
      auto                     operator<=>(Verifier const&) const = default;
    };

    bool produce(Verifier& v, std::vector<Symbol> const& out) {
      for (auto s : out) {
        if (!v.written.empty()) {
          if (v.written.front() != s) {
            return false;
          }
          v.written.erase(v.written.begin());
        } else {
          v.produced.push_back(s);
        }
      }
      return true;
    }
  }  // namespace

  SyncTransducer compile_sequential(AlphabetPtr alphabet, SequentialMachine const& m,
                                    std::size_t lag) {
    auto                 pairs = Alphabet::product({alphabet, alphabet});
    StateIndexer<Verifier> idx;
    idx.id(Verifier{m.start, {}, {}, false, false});
    std::vector<std::tuple<int, Symbol, int>> edges;
    std::vector<bool>                         acc;
    std::size_t const                         sigma = alphabet->size();
    while (idx.pending()) {
      int      id  = idx.pop();
      Verifier cur = idx.state(id);
      if (cur.in_done) {
        acc.push_back(cur.produced.empty() && cur.written.empty());
      } else {
        auto fin = m.finish(cur.seq);
        acc.push_back(cur.produced.empty() && fin && *fin == cur.written);
      }
      for (std::size_t xi = 0; xi <= sigma; ++xi) {
        Symbol   x = xi == sigma ? kPad : static_cast<Symbol>(xi);
        Verifier base = cur;
        if (x != kPad) {
          if (base.in_done) {
            continue;
          }
          auto st = m.step(base.seq, x);
          if (!st) {
            continue;
          }
          base.seq = st->next;
          if (!produce(base, st->out)) {
            continue;
          }
        } else if (!base.in_done) {
          auto fin = m.finish(base.seq);
          if (!fin || !produce(base, *fin)) {
            continue;
          }
          base.in_done = true;
        }
        for (std::size_t yi = 0; yi <= sigma; ++yi) {
          Symbol y = yi == sigma ? kPad : static_cast<Symbol>(yi);
          if (x == kPad && y == kPad) {
            continue;
          }
          Verifier nv = base;
          if (y == kPad) {
            nv.out_done = true;
          } else {
            if (nv.out_done) {
              continue;
            }
            if (!nv.produced.empty()) {
              if (nv.produced.front() != y) {
                continue;
              }
              nv.produced.erase(nv.produced.begin());
            } else {
              nv.written.push_back(y);
            }
          }
          if (nv.out_done && !nv.produced.empty()) {
            continue;
          }
          if (nv.produced.size() > lag || nv.written.size() > lag) {
            continue;
          }
          std::array<Symbol, 2> parts{x, y};
          edges.emplace_back(id, pairs->compose(parts), idx.id(nv));
        }
      }
    }
    Dfa d(pairs);
    for (bool a : acc) {
      d.add_state(a);
    }
    d.set_start(0);
    for (auto [f, s, to] : edges) {
      d.set_transition(f, s, to);
    }
    return SyncTransducer::from_pair_dfa(alphabet, d.minimized());
  }

  namespace {
    std::string sym_name(AlphabetPtr const& a, Symbol s) {
      return s == kPad ? std::string(kPadToken) : a->name(s);
    }
    Symbol sym_code(AlphabetPtr const& a, std::string const& n) {
      return n == kPadToken ? kPad : a->at(n);
    }
  }  // namespace

  std::string transducer_to_json(SyncTransducer const& t) {
    nlohmann::json j;
    j["alphabet"] = t.alphabet()->names();
    j["states"]   = t.state_count();
    j["start"]    = t.start();
    auto& acc     = j["accepting"] = nlohmann::json::array();
    for (int q = 0; q < t.state_count(); ++q) {
      if (t.accepting(q)) {
        acc.push_back(q);
      }
    }
    auto& ts = j["transitions"] = nlohmann::json::array();
    for (auto const& tr : t.transitions()) {
      ts.push_back({{"from", tr.from},
                    {"in", sym_name(t.alphabet(), tr.in)},
                    {"out", sym_name(t.alphabet(), tr.out)},
                    {"to", tr.to}});
    }
    return j.dump(2);
  }

  SyncTransducer transducer_from_json(std::string const& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(std::string("invalid transducer JSON: ") + e.what(), e.byte);
    }
    try {
      auto alphabet = Alphabet::make(j.at("alphabet").get<std::vector<std::string>>());
      int  states   = j.at("states").get<int>();
      std::vector<std::uint8_t> acc(static_cast<std::size_t>(std::max(states, 0)), 0);
      for (auto const& q : j.at("accepting")) {
        acc.at(q.get<std::size_t>()) = 1;
      }
      std::vector<SyncTransducer::Transition> ts;
      for (auto const& tr : j.at("transitions")) {
        ts.push_back({tr.at("from").get<int>(), sym_code(alphabet, tr.at("in").get<std::string>()),
                      sym_code(alphabet, tr.at("out").get<std::string>()), tr.at("to").get<int>()});
      }
      return SyncTransducer(alphabet, states, j.at("start").get<int>(), std::move(acc),
                            std::move(ts));
    } catch (nlohmann::json::exception const& e) {
      throw UsageError(std::string("malformed transducer JSON: ") + e.what());
    } catch (std::out_of_range const&) {
      throw UsageError("malformed transducer JSON: accepting state out of range");
    }
  }

  std::string dfa_to_json(Dfa const& d) {
    nlohmann::json j;
    j["states"] = d.state_count();
    j["start"]  = d.start();
    auto& acc   = j["accepting"] = nlohmann::json::array();
    auto& ts    = j["transitions"] = nlohmann::json::array();
    for (int q = 0; q < d.state_count(); ++q) {
      if (d.accepting(q)) {
        acc.push_back(q);
      }
      for (Symbol s = 0; s < d.alphabet()->size(); ++s) {
        int to = d.next(q, s);
        if (to >= 0) {
          ts.push_back({{"from", q}, {"symbol", d.alphabet()->name(s)}, {"to", to}});
        }
      }
    }
    return j.dump(2);
  }

}  // namespace cayley
