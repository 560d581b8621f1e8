#ifndef CAYLEY_GROUPS_HPP_
#define CAYLEY_GROUPS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cayley/oracle.hpp"
#include "cayley/rational.hpp"
#include "cayley/representation.hpp"

namespace cayley {

  // ---- lamplighter Z2 wr Z ----

  // {b, a, a', ↑, #}
  AlphabetPtr lamplighter_alphabet();
  // a^l # u # a^(z-r)
  Word        lamplighter_encode(LampEl const& g);
  // Throws DomainError for words outside the normal-form language.
  LampEl      lamplighter_decode(Word const& w);
  // Blind one-counter acceptor.
  bool        lamplighter_member(Word const& w);
  // Some normal form starts with w.
  bool        lamplighter_viable_prefix(Word const& w);

  SequentialMachine lamplighter_times_a_machine();
  SequentialMachine lamplighter_times_a_inverse_machine();
  SequentialMachine lamplighter_times_b_machine();

  // Generators a, a', b. With tm_b the b-multiplier runs on the shipped
  // position-faithful machine instead of a transducer.
  RepPtr lamplighter_rep(bool tm_b = false);

  // ---- Baumslag-Solitar BS(p, q) ----

  // Britton form rendered as w_l t^e_l ... w_1 t^e_1 a^k over {a, a', t, t'}.
  Word        bs_render(BrittonForm const& f, AlphabetPtr const& sigma);
  // Throws DomainError unless w is a rendered Britton form.
  BrittonForm bs_parse(int p, int q, Word const& w);
  bool        bs_is_normal(BrittonForm const& f);
  // Right multiplication on the structured form; gen in {a, a', t, t'}.
  BrittonForm bs_multiply(BrittonForm f, char gen, bool inverse);
  // Regular normal-form language.
  Dfa         bs_language(int p, int q, AlphabetPtr const& sigma);

  RepPtr bs_rep(int p, int q);

  // ---- Z[1/k] ----

  // d / k^l with base-k digits, least significant fractional digit first.
  struct ZkNumber {
    int                  k = 2;
    std::vector<int>     frac;    // frac[0] is the k^-len digit
    std::vector<int>     whole;   // whole[0] is the units digit
    bool                 negative = false;  // value = digits - k^|whole|

    static ZkNumber from_rational(int k, Rational const& r);
    Rational        value() const;
  };

  // Digits "0".."k-1", the radix point "." and the sign symbols "+", "-".
  AlphabetPtr zk_alphabet(int k);
  Word        zk_encode(ZkNumber const& x, AlphabetPtr const& sigma);
  Word        zk_encode(int k, Rational const& r, AlphabetPtr const& sigma);
  // Throws DomainError for non-canonical words.
  ZkNumber    zk_decode(int k, Word const& w);
  bool        zk_member(int k, Word const& w);
  Dfa         zk_language(int k, AlphabetPtr const& sigma);
  // x -> x + c for c in {1, -1, 1/k, -1/k}, compiled from a carry machine.
  SequentialMachine zk_add_machine(int k, int sign, bool fractional);
  std::shared_ptr<SyncTransducer const> zk_add_transducer(int k, int sign, bool fractional);
  // Two-operand addition by a synchronous carry scan aligned at the radix point.
  Word zk_add(int k, Word const& x, Word const& y);
  // x -> t x for a fixed t; throws DomainError when the product leaves Z[1/k].
  Word zk_scale(int k, Rational const& t, Word const& w);

  // Generators 1, 1', 1/k, 1/k' (the primes are negatives).
  RepPtr zk_rep(int k);
  // Z^n with generators the first n letters from a..z (skipping none).
  RepPtr zn_rep(int n);

  // ---- matrix groups over Q ----

  struct NamedMatrix {
    std::string name;
    RatMatrix   matrix;
    std::string inverse_name;  // empty: use name + "'"
  };
  // Least k with every entry of the generators and inverses in Z[1/k].
  int      common_base(std::vector<RatMatrix> const& mats);
  RepPtr   matrix_rep(std::string name, std::vector<NamedMatrix> gens);
  // {n, generators: [{name, entries, inverseName}]}
  std::vector<NamedMatrix> read_matrix_file(std::string const& path);
  std::vector<NamedMatrix> parse_matrix_spec(nlohmann::json const& j, std::string const& origin);
  Word      matrix_encode(RatMatrix const& m, int k, AlphabetPtr const& sigma);
  RatMatrix matrix_decode(Word const& w, int k);

  // ---- nilpotent groups via Hall polynomials ----

  // Polynomial in the coordinates x_1..x_n with rational coefficients.
  struct Monomial {
    Rational         coeff;
    std::vector<int> powers;
  };
  using Polynomial = std::vector<Monomial>;

  struct NilpotentTable {
    std::string              name;
    int                      rank = 0;
    std::vector<std::string> generators;  // each gets an inverse g'
    // updates[s][i]: new x_i after right multiplication by S symbol s.
    std::vector<std::vector<Polynomial>> updates;
  };

  BigInt         evaluate(Polynomial const& p, std::vector<BigInt> const& x);
  NilpotentTable heisenberg_table();
  RepPtr         nilpotent_rep(NilpotentTable table, OraclePtr oracle,
                               std::function<OracleElement(std::vector<BigInt> const&)> to_oracle);
  RepPtr         heisenberg_rep();

  // Signed base-2 coordinate tracks.
  AlphabetPtr         nilpotent_alphabet(int rank);
  Word                coordinates_encode(std::vector<BigInt> const& x, AlphabetPtr const& sigma);
  std::vector<BigInt> coordinates_decode(Word const& w, int rank);

}  // namespace cayley

#endif  // CAYLEY_GROUPS_HPP_
