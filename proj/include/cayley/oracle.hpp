#ifndef CAYLEY_ORACLE_HPP_
#define CAYLEY_ORACLE_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cayley/rational.hpp"
#include "cayley/words.hpp"

namespace cayley {

  struct LampEl {
    std::set<long> lit;
    long           z = 0;
  };

  // w_l t^{e_l} ... w_1 t^{e_1} a^k with syllables stored left to right.
  struct BrittonForm {
    struct Syllable {
      long a;    // exponent of w_i
      int  eps;  // +1 or -1
    };
    int                   p = 1, q = 2;
    std::vector<Syllable> syllables;
    BigInt                tail;
  };

  // Freely reduced word; letter +i / -i is generator i-1 or its inverse.
  struct FreeWord {
    std::vector<int> letters;
  };

  struct OracleElement;

  // Pair (parts = {x, y}), free-product block list (labels = factor ids),
  // or coset pair (parts = {h}, labels = {k}).
  struct Composite {
    std::vector<OracleElement> parts;
    std::vector<int>           labels;
  };

  struct OracleElement {
    std::variant<LampEl, RatMatrix, BrittonForm, FreeWord, Composite> value;
    // Canonical serialization; equality and hashing use it.
    std::string key;

    bool operator==(OracleElement const& o) const {
      return key == o.key;
    }
  };

  OracleElement make_lamp(LampEl e);
  OracleElement make_matrix(RatMatrix m);
  OracleElement make_britton(BrittonForm f);
  OracleElement make_free(FreeWord w, std::vector<std::string> const& names);
  OracleElement make_pair(OracleElement x, OracleElement y);
  OracleElement make_blocks(std::vector<OracleElement> blocks, std::vector<int> factors);
  OracleElement make_coset(OracleElement h, int k, std::string const& coset_name);

  // Exact group arithmetic, independent of any representation.
  class GroupOracle {
   public:
    virtual ~GroupOracle() = default;

    virtual std::string   name() const = 0;
    // Semigroup generators S; inverse of the i-th generator is inverse_of(i).
    virtual AlphabetPtr   generators() const = 0;
    virtual Symbol        inverse_of(Symbol s) const = 0;
    virtual OracleElement identity() const = 0;
    virtual OracleElement act(OracleElement const& g, Symbol s) const = 0;

    virtual std::optional<OracleElement> inverse(OracleElement const&) const {
      return std::nullopt;
    }
    virtual std::optional<OracleElement> multiply(OracleElement const&,
                                                  OracleElement const&) const {
      return std::nullopt;
    }
  };

  using OraclePtr = std::shared_ptr<GroupOracle const>;

  OracleElement evaluate_word(GroupOracle const& o, Word const& v);
  OracleElement evaluate_word(GroupOracle const& o, std::string_view text);

  OraclePtr lamplighter_oracle();
  // names[i] with matrix mats[i]; each generator's inverse is appended as
  // inverse_names[i] unless that name is empty (self-inverse).
  struct MatrixGenerator {
    std::string name;
    RatMatrix   matrix;
    std::string inverse_name;
  };
  OraclePtr matrix_oracle(std::string name, std::vector<MatrixGenerator> gens);
  OraclePtr bs_matrix_oracle(int q);  // BS(1,q): a -> [[1,1],[0,1]], t -> [[q,0],[0,1]]
  OraclePtr heisenberg_oracle();
  OraclePtr britton_oracle(int p, int q);
  OraclePtr free_oracle(std::vector<std::string> names);
  OraclePtr pair_oracle(OraclePtr x, OraclePtr y, AlphabetPtr generators);
  OraclePtr free_product_oracle(OraclePtr x, OraclePtr y, AlphabetPtr generators);
  // Generators are words over the parent's generators.
  OraclePtr subgroup_oracle(OraclePtr parent, AlphabetPtr generators,
                            std::vector<Word> images);

  // Group given as H-cosets: element (h, k). rules[k][q] = (H-word, k').
  struct CosetRule {
    Word word;
    int  next;
  };
  OraclePtr coset_oracle(OraclePtr h, AlphabetPtr generators,
                         std::vector<std::string> coset_names,
                         std::vector<std::vector<CosetRule>> rules);

  enum class PinchOrder { Leftmost, Rightmost };
  // Repeated pinch removal followed by syllable collection.
  BrittonForm britton_reduce(int p, int q, Word const& v, PinchOrder order = PinchOrder::Leftmost);
  std::string britton_str(BrittonForm const& f);

  // Word-metric ball around the identity, grown layer by layer.
  class CayleyBall {
   public:
    CayleyBall(OraclePtr oracle, std::size_t cap = 4'000'000);

    // Throws CapExceeded if the ball would exceed the cap.
    void grow_to(int radius);
    int  radius() const noexcept {
      return _radius;
    }
    std::size_t size() const noexcept {
      return _elements.size();
    }

    std::optional<int> distance(OracleElement const& g) const;
    // A geodesic word for g (when inside the ball).
    std::optional<Word> geodesic(OracleElement const& g) const;

    std::vector<OracleElement> const& elements() const noexcept {
      return _elements;
    }
    int depth(std::size_t i) const {
      return _dist[i];
    }
    GroupOracle const& oracle() const noexcept {
      return *_oracle;
    }

    // element-serialization \t distance
    std::string tsv() const;

   private:
    OraclePtr                                    _oracle;
    std::size_t                                  _cap;
    int                                          _radius = 0;
    std::vector<OracleElement>                   _elements;
    std::vector<int>                             _dist;
    std::vector<int>                             _parent;
    std::vector<Symbol>                          _via;
    std::unordered_map<std::string, std::size_t> _index;
    std::size_t                                  _frontier = 0;
  };

  CayleyBall bfs_ball(OraclePtr oracle, int radius, std::size_t cap = 4'000'000);

  // d_A(g, h) = d_A(g^-1 h) via the ball when the oracle has group
  // operations; otherwise a bounded search from g. nullopt beyond max_radius.
  std::optional<int> word_distance(CayleyBall& ball, OracleElement const& g,
                                   OracleElement const& h, int max_radius);

}  // namespace cayley

#endif  // CAYLEY_ORACLE_HPP_
