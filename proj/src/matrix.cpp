#include <cmath>
#include <fstream>
#include <mutex>
#include <set>

#include <json.hpp>

#include "cayley/errors.hpp"
#include "cayley/groups.hpp"

namespace cayley {

  namespace {
    // Distinct prime factors by trial division; denominators here are small.
    void collect_primes(BigInt n, std::set<BigInt>& out) {
      for (BigInt p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
          out.insert(p);
          while (n % p == 0) {
            n /= p;
          }
        }
      }
      if (n > 1) {
        out.insert(n);
      }
    }

    int digits_base(int k) {
      return std::max(k, 2);
    }

    std::size_t digit_count(BigInt n, int base) {
      std::size_t d = 0;
      while (n > 0) {
        n /= base;
        ++d;
      }
      return d;
    }

    // Growth of any track under right multiplication by m: fractional digits
    // gain at most F, whole digits at most log(n max|m|) plus a carry and a
    // sign digit.
    std::uint64_t track_growth(RatMatrix const& m, int base) {
      std::size_t frac = 0;
      BigInt      top  = 1;
      for (auto const& e : m.entries()) {
        BigInt den = boost::multiprecision::denominator(e);
        std::size_t f = 0;
        BigInt      kl = 1;
        while (kl % den != 0) {
          kl *= base;
          ++f;
        }
        frac = std::max(frac, f);
        BigInt mag = abs(boost::multiprecision::numerator(e)) / den + 1;
        top        = std::max(top, mag);
      }
      return frac + digit_count(top * m.dim(), base) + 3;
    }

    AlphabetPtr matrix_alphabet(std::size_t n, int base) {
      std::vector<AlphabetPtr> tracks(n * n, zk_alphabet(base));
      try {
        return Alphabet::product(std::move(tracks));
      } catch (UsageError const&) {
        throw UsageError("matrix encoding with " + std::to_string(n * n) + " base-"
                         + std::to_string(base) + " tracks exceeds the 32-bit symbol space");
      }
    }

    Rational entry_value(nlohmann::json const& e) {
      if (e.is_string()) {
        return parse_rational(e.get<std::string>());
      }
      if (e.is_number_integer()) {
        return Rational(e.get<long long>());
      }
      throw UsageError("matrix entries must be integers or \"p/q\" strings");
    }
  }  // namespace

  int common_base(std::vector<RatMatrix> const& mats) {
    std::set<BigInt> primes;
    for (auto const& m : mats) {
      for (auto const& e : m.entries()) {
        collect_primes(boost::multiprecision::denominator(e), primes);
      }
    }
    BigInt k = 1;
    for (auto const& p : primes) {
      k *= p;
    }
    if (k > 1'000'000) {
      throw UsageError("common base " + to_string(k) + " is too large");
    }
    return static_cast<int>(k);
  }

  Word matrix_encode(RatMatrix const& m, int k, AlphabetPtr const& sigma) {
    int               base = digits_base(k);
    std::vector<Word> tracks;
    for (auto const& e : m.entries()) {
      tracks.push_back(zk_encode(base, e, zk_alphabet(base)));
    }
    return interleave(sigma, tracks);
  }

  RatMatrix matrix_decode(Word const& w, int k) {
    int  base   = digits_base(k);
    auto tracks = split_tracks(w);
    auto n      = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(tracks.size()))));
    if (n * n != tracks.size()) {
      throw DomainError("track count is not a square");
    }
    std::vector<Rational> e;
    for (auto const& t : tracks) {
      e.push_back(zk_decode(base, t).value());
    }
    return RatMatrix(n, std::move(e));
  }

  RepPtr matrix_rep(std::string name, std::vector<NamedMatrix> gens) {
    if (gens.empty()) {
      throw UsageError("matrix_rep needs at least one generator");
    }
    std::size_t const n = gens.front().matrix.dim();
    std::vector<std::string> names;
    std::vector<RatMatrix>   mats;
    std::vector<Symbol>      partner;
    std::vector<MatrixGenerator> og;
    for (auto& g : gens) {
      if (g.matrix.dim() != n) {
        throw UsageError("generator '" + g.name + "' has the wrong dimension");
      }
      if (g.inverse_name.empty()) {
        g.inverse_name = g.name + "'";
      }
      RatMatrix inv;
      try {
        inv = g.matrix.inverse();
      } catch (DomainError const&) {
        throw DomainError("generator '" + g.name + "' is singular");
      }
      auto const at = static_cast<Symbol>(names.size());
      if (g.inverse_name == g.name) {
        if (!(inv == g.matrix)) {
          throw UsageError("generator '" + g.name + "' is declared self-inverse but is not an involution");
        }
        names.push_back(g.name);
        mats.push_back(g.matrix);
        partner.push_back(at);
        og.push_back({g.name, g.matrix, ""});
        continue;
      }
      names.insert(names.end(), {g.name, g.inverse_name});
      mats.insert(mats.end(), {g.matrix, inv});
      partner.insert(partner.end(), {static_cast<Symbol>(at + 1), at});
      og.push_back({g.name, g.matrix, g.inverse_name});
    }
    int const k    = common_base(mats);
    int const base = digits_base(k);

    auto rep      = std::make_shared<CayleyRep>();
    rep->name     = std::move(name);
    rep->sigma    = matrix_alphabet(n, base);
    rep->identity = matrix_encode(RatMatrix::identity(n), k, rep->sigma);
    rep->gens.symbols = Alphabet::make(names);
    rep->gens.inverse = partner;
    rep->oracle = matrix_oracle(rep->name + "-matrix", og);

    // Membership is syntactic validity plus reachability within a small
    // oracle ball; anything valid but not found is unknown.
    struct Reach {
      std::once_flag          once;
      std::set<std::string>   keys;
    };
    auto reach  = std::make_shared<Reach>();
    auto oracle = rep->oracle;
    rep->language.cls    = LanguageClass::RE;
    rep->language.member = [k, reach, oracle](Word const& w) {
      RatMatrix m;
      try {
        m = matrix_decode(w, k);
      } catch (DomainError const&) {
        return Membership::Out;
      }
      if (m.determinant() == 0) {
        return Membership::Out;
      }
      std::call_once(reach->once, [&] {
        auto ball = bfs_ball(oracle, 4, 200'000);
        for (auto const& g : ball.elements()) {
          reach->keys.insert(g.key);
        }
      });
      return reach->keys.count(make_matrix(m).key) ? Membership::In : Membership::Unknown;
    };

    auto const sigma = rep->sigma;
    for (std::size_t s = 0; s < mats.size(); ++s) {
      RatMatrix const m = mats[s];
      std::uint64_t   K = std::max(track_growth(m, base), track_growth(mats[partner[s]], base));
      auto fn = [m, k, sigma](Word const& w, std::uint64_t& steps) {
        auto out = matrix_encode(matrix_decode(w, k) * m, k, sigma);
        steps    = w.size() + out.size() + 2;
        return out;
      };
      rep->multipliers.push_back(MultiplierFn::native("matrix-times-" + names[s], fn,
                                                      TimeBudget::pf_linear(2, K + 2), K));
    }
    rep->time_class = TimeClass::PfLinear;
    rep->decode     = [k](Word const& w) { return make_matrix(matrix_decode(w, k)); };
    rep->finalize();
    rep->validate();
    return rep;
  }

  std::vector<NamedMatrix> parse_matrix_spec(nlohmann::json const& j, std::string const& origin) {
    try {
      auto const               n = j.at("n").get<std::size_t>();
      std::vector<NamedMatrix> out;
      for (auto const& g : j.at("generators")) {
        auto const  name = g.at("name").get<std::string>();
        auto const& rows = g.at("entries");
        if (rows.size() != n) {
          throw UsageError(origin + ": generator '" + name + "' is not " + std::to_string(n) + "x"
                           + std::to_string(n));
        }
        std::vector<Rational> e;
        for (auto const& row : rows) {
          if (row.size() != n) {
            throw UsageError(origin + ": ragged matrix row in '" + name + "'");
          }
          for (auto const& x : row) {
            e.push_back(entry_value(x));
          }
        }
        out.push_back({name, RatMatrix(n, std::move(e)), g.value("inverseName", std::string())});
      }
      return out;
    } catch (nlohmann::json::exception const& e) {
      throw UsageError(origin + ": " + e.what());
    }
  }

  std::vector<NamedMatrix> read_matrix_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw UsageError("cannot open matrix file '" + path + "'");
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(path + ": " + e.what(), e.byte);
    }
    return parse_matrix_spec(j, path);
  }

}  // namespace cayley
