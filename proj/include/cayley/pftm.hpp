#ifndef CAYLEY_PFTM_HPP_
#define CAYLEY_PFTM_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cayley/words.hpp"

namespace cayley {

  // Maximum step count as a function of input length.
  class TimeBudget {
   public:
    enum class Kind { PfLinear, Quadratic, Polynomial, Composed, Overhead };

    static TimeBudget pf_linear(std::uint64_t c1, std::uint64_t c0);
    static TimeBudget quadratic(std::uint64_t c2);
    // coeffs[i] multiplies n^i.
    static TimeBudget polynomial(std::vector<std::uint64_t> coeffs);
    // Sequential application of machines: the i-th machine sees an input
    // whose length grew by at most `growth` per earlier machine, or by its
    // own step count when growth is unknown.
    static TimeBudget composed(std::vector<TimeBudget> parts, std::optional<std::uint64_t> growth);
    static TimeBudget unlimited();
    // inner(n) + a n inner(n) + b n + c: a machine wrapped in scans and
    // shifts of the untouched part of its tape.
    static TimeBudget overhead(TimeBudget inner, std::uint64_t a, std::uint64_t b, std::uint64_t c);

    Kind kind() const noexcept {
      return _kind;
    }
    std::uint64_t operator()(std::uint64_t n) const;

    // Linear budgets, including compositions of linear parts with known
    // growth, as (c1, c0).
    std::optional<std::pair<std::uint64_t, std::uint64_t>> linear_constants() const;
    bool is_pf_linear() const {
      return linear_constants().has_value();
    }
    std::string describe() const;

   private:
    Kind                         _kind = Kind::Polynomial;
    std::vector<std::uint64_t>   _coeffs;
    std::vector<TimeBudget>      _parts;
    std::optional<std::uint64_t> _growth;
  };

  enum class Move { L, R, S };

  using TapeSymbol = std::uint16_t;
  inline constexpr TapeSymbol kBoxPlus = 0;
  inline constexpr TapeSymbol kBoxDot  = 1;

  // One-tape machine whose tape starts ⊞ x ⊡ ⊡ ... with the head on ⊞.
  // Tape symbols: ⊞, ⊡, the user alphabet, then extra work symbols.
  class PfProgram {
   public:
    struct Rule {
      int        state;
      TapeSymbol read;
      TapeSymbol write;
      Move       move;
      int        next;
    };

    PfProgram(std::string name, AlphabetPtr alphabet, std::vector<std::string> work,
              std::vector<std::string> states, int start, int accept, std::vector<Rule> rules);

    std::string const& name() const noexcept {
      return _name;
    }
    AlphabetPtr const& alphabet() const noexcept {
      return _alphabet;
    }
    std::vector<std::string> const& work_symbols() const noexcept {
      return _work;
    }
    std::vector<std::string> const& states() const noexcept {
      return _states;
    }
    int start() const noexcept {
      return _start;
    }
    int accept() const noexcept {
      return _accept;
    }
    std::vector<Rule> const& rules() const noexcept {
      return _rules;
    }
    std::size_t tape_symbol_count() const noexcept {
      return 2 + _alphabet->size() + _work.size();
    }

    TapeSymbol  user(Symbol s) const {
      return static_cast<TapeSymbol>(2 + s);
    }
    std::string symbol_name(TapeSymbol t) const;
    TapeSymbol  symbol_code(std::string const& name) const;
    std::string rule_str(Rule const& r) const;

    Rule const* find(int state, TapeSymbol read) const;

   private:
    std::string              _name;
    AlphabetPtr              _alphabet;
    std::vector<std::string> _work;
    std::vector<std::string> _states;
    int                      _start;
    int                      _accept;
    std::vector<Rule>        _rules;
    std::vector<int>         _table;
  };

  // Builds programs from readable rule lists; states are created on first use.
  class PfBuilder {
   public:
    PfBuilder(std::string name, AlphabetPtr alphabet, std::vector<std::string> work = {});
    PfBuilder& rule(std::string const& state, std::string const& read, std::string const& write,
                    Move move, std::string const& next);
    PfProgram build(std::string const& start, std::string const& accept) const;

   private:
    int state(std::string const& name);

    std::string                              _name;
    AlphabetPtr                              _alphabet;
    std::vector<std::string>                 _work;
    std::vector<std::string>                 _states;
    std::map<std::string, int>               _ids;
    std::vector<std::tuple<int, std::string, std::string, Move, int>> _rules;
  };

  struct PfVerdict {
    bool                     faithful = true;
    std::vector<std::string> offending;
  };

  PfVerdict check_position_faithful(PfProgram const& prog);

  struct PfRun {
    Word          output;
    std::uint64_t steps = 0;
  };

  // Throws BudgetExceeded, FaithfulnessError, or DomainError when the machine
  // halts without accepting or leaves non-user symbols in its output.
  PfRun run(PfProgram const& prog, Word const& input, TimeBudget const& budget);

  std::string program_to_json(PfProgram const& prog);
  PfProgram   program_from_json(std::string const& text);

  // A shipped program together with its declared budget.
  struct ShippedProgram {
    PfProgram  program;
    TimeBudget budget;
  };

  // append-x over {a, b, x}.
  ShippedProgram append_x_program();
  // Right multiplication by a and a' on unary normal forms a^n / a'^n.
  ShippedProgram unary_times_a(AlphabetPtr const& alphabet, bool inverse);
  // Lamplighter right multiplication by b over {b, a, a', ↑, #}.
  ShippedProgram lamplighter_times_b(AlphabetPtr const& alphabet);

}  // namespace cayley

#endif  // CAYLEY_PFTM_HPP_
