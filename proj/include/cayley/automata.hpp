#ifndef CAYLEY_AUTOMATA_HPP_
#define CAYLEY_AUTOMATA_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cayley/words.hpp"

namespace cayley {

  // Assigns dense ids to the states of an implicitly given automaton in
  // discovery order. Callers pop pending ids and expand them.
  template <class State>
  class StateIndexer {
   public:
    int id(State const& s) {
      auto [it, fresh] = _ids.try_emplace(s, static_cast<int>(_states.size()));
      if (fresh) {
        _states.push_back(s);
      }
      return it->second;
    }
    std::optional<int> find(State const& s) const {
      auto it = _ids.find(s);
      if (it == _ids.end()) {
        return std::nullopt;
      }
      return it->second;
    }
    bool pending() const noexcept {
      return _cursor < _states.size();
    }
    int pop() noexcept {
      return static_cast<int>(_cursor++);
    }
    State const& state(int i) const {
      return _states[static_cast<std::size_t>(i)];
    }
    std::size_t size() const noexcept {
      return _states.size();
    }

   private:
    std::map<State, int> _ids;
    std::vector<State>   _states;
    std::size_t          _cursor = 0;
  };

  // Deterministic, possibly partial automaton with a dense transition table.
  class Dfa {
   public:
    Dfa() = default;
    explicit Dfa(AlphabetPtr alphabet);

    AlphabetPtr const& alphabet() const noexcept {
      return _alphabet;
    }
    int state_count() const noexcept {
      return static_cast<int>(_accepting.size());
    }
    int start() const noexcept {
      return _start;
    }
    bool accepting(int q) const {
      return _accepting[static_cast<std::size_t>(q)] != 0;
    }
    // -1 when undefined.
    int next(int q, Symbol s) const;

    int  add_state(bool accepting = false);
    void set_start(int q);
    void set_accepting(int q, bool value);
    void set_transition(int from, Symbol s, int to);

    // Runs from q; -1 if the run dies.
    int  run(int q, std::span<Symbol const> w) const;
    bool accepts(std::span<Symbol const> w) const;
    bool accepts(Word const& w) const {
      return accepts(w.letters());
    }

    std::size_t transition_count() const;

    // Keeps states both reachable and co-reachable.
    Dfa trimmed() const;
    // Minimal partial DFA for the same language, states renumbered in BFS
    // order of the symbol codes so isomorphic automata compare equal.
    Dfa minimized() const;
    Dfa canonical() const;
    bool operator==(Dfa const& other) const;
    bool isomorphic(Dfa const& other) const;

    // Renames symbols into another alphabet: map[old] = new code.
    Dfa relabel(AlphabetPtr alphabet, std::span<Symbol const> map) const;

    static Dfa universal(AlphabetPtr alphabet);
    static Dfa single_word(Word const& w);
    static Dfa finite(AlphabetPtr alphabet, std::vector<Word> const& words);

    // Symbols with at least one transition.
    std::vector<Symbol> used_symbols() const;

   private:
    AlphabetPtr               _alphabet;
    std::size_t               _sigma = 0;
    int                       _start = 0;
    std::vector<std::uint8_t> _accepting;
    std::vector<std::int32_t> _delta;
  };

  Dfa intersect(Dfa const& a, Dfa const& b);
  Dfa unite(Dfa const& a, Dfa const& b);
  // L(a)L(b) where no symbol used by a is used by b, so the switch point is
  // determined by the first b-symbol.
  Dfa concatenate_disjoint(Dfa const& a, Dfa const& b);

  struct Nfa {
    AlphabetPtr                                  alphabet;
    std::vector<int>                             starts;
    std::vector<std::uint8_t>                    accepting;
    std::vector<std::vector<std::pair<Symbol, int>>> edges;

    int add_state(bool acc = false) {
      accepting.push_back(acc ? 1 : 0);
      edges.emplace_back();
      return static_cast<int>(accepting.size()) - 1;
    }
  };

  Dfa determinize(Nfa const& nfa);

  // Two-tape synchronous automaton over a base alphabet. Each transition
  // reads one cell (in, out) of u ⊗ v; either side may be kPad, not both.
  class SyncTransducer {
   public:
    struct Transition {
      int    from;
      Symbol in;
      Symbol out;
      int    to;
      auto   operator<=>(Transition const&) const = default;
    };

    // Validates pad monotonicity of accepted runs and functionality;
    // throws UsageError / FunctionalityError.
    SyncTransducer(AlphabetPtr alphabet, int states, int start, std::vector<std::uint8_t> accepting,
                   std::vector<Transition> transitions);

    // A deterministic automaton over the pair alphabet product({Σ, Σ}).
    static SyncTransducer from_pair_dfa(AlphabetPtr alphabet, Dfa const& pairs);

    AlphabetPtr const& alphabet() const noexcept {
      return _alphabet;
    }
    int state_count() const noexcept {
      return _states;
    }
    int start() const noexcept {
      return _start;
    }
    bool accepting(int q) const {
      return _accepting[static_cast<std::size_t>(q)] != 0;
    }
    std::vector<Transition> const& transitions() const noexcept {
      return _transitions;
    }

    // Transitions leaving q that read `in` (kPad allowed).
    std::span<Transition const> outgoing(int q, Symbol in) const;

    // Acceptor view.
    bool accepts(Word const& u, Word const& v) const;

    // The pair alphabet product({Σ, Σ}) viewed as a DFA/NFA alphabet.
    AlphabetPtr const& pair_alphabet() const noexcept {
      return _pairs;
    }
    Nfa         pair_nfa() const;

   private:
    std::size_t in_index(Symbol in) const {
      return in == kPad ? _alphabet->size() : in;
    }
    void index();
    void check_pad_monotone() const;
    void check_functional() const;

    AlphabetPtr               _alphabet;
    AlphabetPtr               _pairs;
    int                       _states = 0;
    int                       _start  = 0;
    std::vector<std::uint8_t> _accepting;
    std::vector<Transition>   _transitions;
    std::vector<std::size_t>  _offsets;
  };

  struct Evaluation {
    Word        output;
    std::size_t steps = 0;
  };

  // Returns the unique v with u ⊗ v accepted. Steps = |u ⊗ v|.
  // Throws DomainError or FunctionalityError.
  Evaluation evaluate(SyncTransducer const& t, Word const& u);

  int bounded_difference_constant(SyncTransducer const& t);

  // DFA over t.pair_alphabet() accepting {u ⊗ v : u ∈ L(lang), v = t(u)}.
  Dfa relation_automaton(SyncTransducer const& t, Dfa const& lang);

  // Deterministic left-to-right rewriting procedure, compiled into a
  // transducer by a bounded-lag verifier.
  struct SequentialMachine {
    using State = std::vector<int>;
    struct Step {
      State               next;
      std::vector<Symbol> out;
    };
    State                                                   start;
    std::function<std::optional<Step>(State const&, Symbol)> step;
    // Output emitted when the input ends; nullopt rejects.
    std::function<std::optional<std::vector<Symbol>>(State const&)> finish;
  };

  // `lag` bounds how far the output track may run ahead of or behind the
  // machine's production.
  SyncTransducer compile_sequential(AlphabetPtr alphabet, SequentialMachine const& m,
                                    std::size_t lag = 4);

  // JSON interchange {states, start, accepting, alphabet, transitions}.
  std::string    transducer_to_json(SyncTransducer const& t);
  SyncTransducer transducer_from_json(std::string const& text);
  std::string    dfa_to_json(Dfa const& d);

}  // namespace cayley

#endif  // CAYLEY_AUTOMATA_HPP_
