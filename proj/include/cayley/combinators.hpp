#ifndef CAYLEY_COMBINATORS_HPP_
#define CAYLEY_COMBINATORS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cayley/representation.hpp"

namespace cayley {

  // L1 L2 with Σ1, Σ2 tagged apart; generators of the second factor that
  // clash with the first are renamed to the next unused letter.
  RepPtr direct_product(RepPtr first, RepPtr second);

  // Alternating blocks of the ε-normalized factor languages.
  RepPtr free_product(RepPtr first, RepPtr second);

  // G = H ∪ H k_1 ∪ ... ∪ H k_m. rules[k][q] says k q = word k' with word
  // over S_H; S_G lists S_H first, then the extra generators.
  struct FiniteExtensionTable {
    std::string              name = "ext";
    std::vector<std::string> cosets;        // cosets[0] is the trivial coset
    std::vector<std::string> coset_words;   // coset representatives as S_G words
    std::vector<std::pair<std::string, std::string>> extra;  // (name, inverse name)
    std::vector<std::vector<CosetRule>> rules;  // filled by derive when empty
    OraclePtr                oracle;  // for G over S_G, optional
  };

  // Names of S_G for an extension of h.
  AlphabetPtr extension_generators(CayleyRep const& h, FiniteExtensionTable const& table);
  // Solves k q = h k' by BFS over S_H words of length <= bound.
  void derive_extension_rules(CayleyRep const& h, FiniteExtensionTable& table, int bound = 8);
  // Checks every rule in the oracle; throws UsageError naming the first bad one.
  void validate_extension_table(CayleyRep const& h, FiniteExtensionTable const& table);
  FiniteExtensionTable read_extension_table(CayleyRep const& h, std::string const& path);

  RepPtr finite_extension(RepPtr h, FiniteExtensionTable table);

  // Subgroup generated by words over S. Membership is reachability by the
  // enumerator and therefore three-valued. A distortion factor C' gives the
  // quasigeodesic constant C C' for polynomial parents.
  RepPtr subgroup(RepPtr rep, std::vector<std::pair<std::string, std::string>> const& gens,
                  std::optional<double> distortion = std::nullopt);

  // Block decomposition of a free-product normal form: (factor, letters).
  std::vector<std::pair<int, Word>> free_product_blocks(CayleyRep const& rep, Word const& w);

}  // namespace cayley

#endif  // CAYLEY_COMBINATORS_HPP_
