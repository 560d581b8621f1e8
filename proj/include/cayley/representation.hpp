#ifndef CAYLEY_REPRESENTATION_HPP_
#define CAYLEY_REPRESENTATION_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cayley/automata.hpp"
#include "cayley/oracle.hpp"
#include "cayley/pftm.hpp"
#include "cayley/words.hpp"

namespace cayley {

  // S = A ∪ A^-1 as an ordered alphabet with an involution.
  struct GeneratorSet {
    AlphabetPtr         symbols;
    std::vector<Symbol> inverse;

    // Each name x gets a partner x' unless listed in self_inverse.
    static GeneratorSet from_names(std::vector<std::string> const& names,
                                   std::vector<std::string> const& self_inverse = {});
    // Pairs symbols by the trailing-apostrophe convention; unpaired symbols
    // are self-inverse.
    static GeneratorSet from_alphabet(AlphabetPtr symbols);

    std::size_t size() const {
      return symbols->size();
    }
    Symbol at(std::string_view name) const {
      return symbols->at(name);
    }
    // Inverse word of a word over S.
    Word invert(Word const& w) const;
  };

  enum class LanguageClass { REG, ONE_COUNTER, DCFL, RE };
  enum class Membership { In, Out, Unknown };
  enum class TimeClass { PfLinear, Polynomial };

  std::string to_string(LanguageClass c);
  std::string to_string(TimeClass c);
  std::string to_string(Membership m);

  struct LanguageSpec {
    LanguageClass                                cls = LanguageClass::RE;
    std::optional<Dfa>                           dfa;
    std::function<Membership(Word const&)>       member;
    // True when some member of L has this prefix; enables pruned enumeration.
    std::function<bool(Word const&)>             viable_prefix;

    Membership check(Word const& w) const;
  };

  struct MultiplyResult {
    Word          word;
    std::uint64_t steps = 0;
  };

  // A right-multiplication function f_s on normal forms.
  class MultiplierFn {
   public:
    enum class Backend { Transducer, Tm, Native, Composed };
    using NativeFn = std::function<Word(Word const&, std::uint64_t& steps)>;

    static MultiplierFn transducer(std::shared_ptr<SyncTransducer const> t);
    static MultiplierFn tm(std::shared_ptr<PfProgram const> p, TimeBudget budget,
                           std::optional<std::uint64_t> k = std::nullopt);
    static MultiplierFn native(std::string description, NativeFn fn, TimeBudget budget,
                               std::optional<std::uint64_t> k = std::nullopt);
    // f_{m} ∘ ... ∘ f_{1}: parts applied in order.
    static MultiplierFn composed(std::vector<MultiplierFn> parts);

    Backend backend() const noexcept {
      return _backend;
    }
    // Throws BudgetExceeded, DomainError, FaithfulnessError.
    MultiplyResult apply(Word const& w) const;

    TimeBudget const& budget() const noexcept {
      return _budget;
    }
    // Bounded-difference constant, when known.
    std::optional<std::uint64_t> k() const noexcept {
      return _k;
    }
    // Steps on an input of length n are at most c1 n + c0.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> linear_constants() const;
    std::string describe() const;

    std::shared_ptr<SyncTransducer const> const& transducer_ptr() const noexcept {
      return _transducer;
    }
    std::shared_ptr<PfProgram const> const& program_ptr() const noexcept {
      return _program;
    }
    std::vector<MultiplierFn> const& parts() const noexcept {
      return _parts;
    }

   private:
    Backend                               _backend = Backend::Native;
    std::shared_ptr<SyncTransducer const> _transducer;
    std::shared_ptr<PfProgram const>      _program;
    NativeFn                              _native;
    std::vector<MultiplierFn>             _parts;
    TimeBudget                            _budget = TimeBudget::unlimited();
    std::optional<std::uint64_t>          _k;
    std::string                           _description;
  };

  struct ManifestConstants {
    std::optional<std::uint64_t> K;
    std::optional<double>        C;
    std::optional<std::uint64_t> C1, C0, C2;
  };

  struct CayleyRep {
    std::string               name;
    AlphabetPtr               sigma;
    LanguageSpec              language;
    Word                      identity;
    GeneratorSet              gens;
    std::vector<MultiplierFn> multipliers;  // indexed by S symbol
    TimeClass                 time_class = TimeClass::PfLinear;
    std::optional<double>     quasigeodesic_c;
    ManifestConstants         constants;
    // Reference oracle over generators named like S, and ψ into it.
    OraclePtr                                  oracle;
    std::function<OracleElement(Word const&)> decode;

    // Recomputes K, C1, C0, C2 (and C for pf-linear reps) from the
    // multipliers; call after assembling a representation.
    void finalize();
    // Structural invariants; throws UsageError.
    void validate() const;
  };

  using RepPtr = std::shared_ptr<CayleyRep const>;

  struct StepReport {
    std::size_t                input_length = 0;
    std::vector<std::uint64_t> multiplier_steps;
    std::uint64_t              fetch_steps = 0;
    std::uint64_t              total       = 0;
    // False for polynomial representations without a quasigeodesic constant,
    // where the polynomial bound is not guaranteed.
    bool                       bounded     = true;
  };

  struct NormalFormResult {
    Word       word;
    StepReport report;
  };

  struct NormalFormOptions {
    // Refuse polynomial representations without a quasigeodesic constant.
    bool strict = false;
  };

  // Throws MembershipError when w is decidably outside L.
  std::pair<Word, StepReport> multiply_by_generator(CayleyRep const& rep, Word const& w, Symbol s,
                                                    bool check_membership = true);
  NormalFormResult normal_form(CayleyRep const& rep, Word const& v, NormalFormOptions opt = {});
  bool             word_problem(CayleyRep const& rep, Word const& v, NormalFormOptions opt = {});

  // Normal forms of all v with |v| <= radius in BFS discovery order.
  class NormalFormEnumerator {
   public:
    NormalFormEnumerator(RepPtr rep, int radius);
    std::optional<Word> next();
    // Generator-word length at which the last emitted word was found.
    int depth() const noexcept {
      return _depth;
    }

   private:
    RepPtr                                          _rep;
    int                                             _radius;
    int                                             _depth = 0;
    int                                             _layer = 0;
    std::vector<Word>                               _current, _next;
    std::size_t                                     _pos = 0;
    Symbol                                          _gen = 0;
    std::unordered_set<std::vector<Symbol>, WordHash> _seen;
    bool                                            _started = false;
  };

  std::vector<Word> enumerate_normal_forms(RepPtr rep, int radius);

  // New generators as words over S; missing inverses x' are derived.
  RepPtr change_generators(RepPtr rep, std::vector<std::pair<std::string, std::string>> const& gens);

  std::string manifest_json(CayleyRep const& rep);

  // Parses a word over the representation's generators.
  Word generator_word(CayleyRep const& rep, std::string_view text);
  Word normal_word(CayleyRep const& rep, std::string_view text);

}  // namespace cayley

#endif  // CAYLEY_REPRESENTATION_HPP_
