#ifndef CAYLEY_RATIONAL_HPP_
#define CAYLEY_RATIONAL_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cayley {

  using BigInt   = boost::multiprecision::cpp_int;
  using Rational = boost::multiprecision::cpp_rational;

  // "p/q", "-3", "7/1"; throws UsageError.
  Rational    parse_rational(std::string_view text);
  std::string to_string(Rational const& r);
  std::string to_string(BigInt const& n);

  // Floor division and non-negative remainder.
  BigInt floor_div(BigInt const& a, BigInt const& b);
  BigInt floor_mod(BigInt const& a, BigInt const& b);

  class RatMatrix {
   public:
    RatMatrix() = default;
    explicit RatMatrix(std::size_t n);
    RatMatrix(std::size_t n, std::vector<Rational> entries);

    static RatMatrix identity(std::size_t n);

    std::size_t dim() const noexcept {
      return _n;
    }
    Rational const& operator()(std::size_t i, std::size_t j) const {
      return _e[i * _n + j];
    }
    Rational& operator()(std::size_t i, std::size_t j) {
      return _e[i * _n + j];
    }
    std::vector<Rational> const& entries() const noexcept {
      return _e;
    }

    RatMatrix operator*(RatMatrix const& o) const;
    bool      operator==(RatMatrix const& o) const = default;

    Rational  determinant() const;
    // Throws DomainError when singular.
    RatMatrix inverse() const;

    std::string str() const;

   private:
    std::size_t           _n = 0;
    std::vector<Rational> _e;
  };

}  // namespace cayley

#endif  // CAYLEY_RATIONAL_HPP_
