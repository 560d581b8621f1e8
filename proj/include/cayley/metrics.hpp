#ifndef CAYLEY_METRICS_HPP_
#define CAYLEY_METRICS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cayley/errors.hpp"
#include "cayley/representation.hpp"

namespace cayley {

  // α: Σ -> S*, one image word per symbol code; the empty word is e.
  struct SymbolWeighting {
    AlphabetPtr       sigma;
    std::vector<std::optional<Word>> images;

    Word const& image(Symbol x) const;

    // Symbols map to the generator of the same name; ↑ and # map to e.
    static SymbolWeighting natural(CayleyRep const& rep);
    // {"symbol": "generator word", ...}, total on Σ.
    static SymbolWeighting from_json(CayleyRep const& rep, nlohmann::json const& j,
                                     std::string const& origin = "alpha");
    // A JSON file, or the literal "paper" for the natural weighting.
    static SymbolWeighting load(CayleyRep const& rep, std::string const& path);

    void set(CayleyRep const& rep, std::string const& symbol, std::string_view word);
  };

  // α(σ1) ... α(σk) evaluated in the oracle.
  OracleElement pi_alpha(SymbolWeighting const& alpha, Word const& w, GroupOracle const& o);

  struct DistanceTable {
    int                        first = 0;  // least n with L^{<=n} nonempty
    int                        max_n = 0;
    std::vector<int>           h;          // h[i] is h(first + i)
    std::size_t                words = 0;  // normal forms examined
    // A word attaining the last row's maximum.
    std::optional<Word>        witness;

    bool vanishes() const;
    std::string tsv() const;
    nlohmann::json summary() const;
  };

  // Cap hit before every row resolved; carries the rows that did.
  class PartialTableError : public CapExceeded {
   public:
    PartialTableError(std::string const& msg, DistanceTable resolved)
        : CapExceeded(msg), _table(std::move(resolved)) {}
    DistanceTable const& resolved() const noexcept {
      return _table;
    }

   private:
    DistanceTable _table;
  };

  struct DistanceOptions {
    std::size_t word_cap     = 50'000'000;
    std::size_t ball_cap     = 4'000'000;
    int         max_distance = 64;
    // Enumerator radius for representations without a decidable language;
    // defaults to max_n.
    std::optional<int> radius;
  };

  // Calls visit on every w in L with |w| <= max_n: depth first over Σ codes
  // for automaton- or prefix-backed languages, enumerator order otherwise.
  void for_each_normal_form(CayleyRep const& rep, int max_n,
                            std::function<void(Word const&)> const& visit,
                            DistanceOptions const& opt = {});

  DistanceTable h_function(CayleyRep const& rep, SymbolWeighting const& alpha, OraclePtr oracle,
                           int max_n, DistanceOptions const& opt = {});

  struct QuasigeodesicReport {
    struct Point {
      Word        normal_form;
      Word        geodesic;
      int         distance = 0;
    };
    int                  radius   = 0;
    std::size_t          elements = 0;
    double               C        = 0;  // minimal constant over the ball
    std::optional<Point> worst;
    // First element breaking the declared constant, if any.
    std::optional<Point> violation;
  };

  QuasigeodesicReport quasigeodesic_check(RepPtr rep, OraclePtr oracle, int radius,
                                          std::size_t cap = 4'000'000);

  struct GrowthPoint {
    int         n            = 0;
    std::size_t input_length = 0;
    std::size_t nf_length    = 0;
    double      ratio        = 0;  // |nf| / (|v| + 1)
  };

  // Normal-form lengths along a word family; each normal form is checked
  // against the input in the cross-check oracle when one is given.
  std::vector<GrowthPoint> growth_witness(CayleyRep const& rep, std::function<Word(int)> const& family,
                                          int max_n, OraclePtr cross_check = nullptr);

  // t^n a t^-n over the generators of BS(p,q).
  Word bs_conjugate_word(CayleyRep const& rep, int n);

}  // namespace cayley

#endif  // CAYLEY_METRICS_HPP_
