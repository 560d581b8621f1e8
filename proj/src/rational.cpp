#include "cayley/rational.hpp"

#include "cayley/errors.hpp"

namespace cayley {

  namespace {
    BigInt parse_int(std::string_view s) {
      std::string_view digits = s;
      if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        digits.remove_prefix(1);
      }
      if (digits.empty()
          || digits.find_first_not_of("0123456789") != std::string_view::npos) {
        throw UsageError("not an integer: '" + std::string(s) + "'");
      }
      BigInt v{std::string(digits)};
      return s.front() == '-' ? BigInt(-v) : v;
    }
  }  // namespace

  Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      return Rational(parse_int(text));
    }
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) {
      throw UsageError("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
  }

  std::string to_string(BigInt const& n) {
    return n.str();
  }

  std::string to_string(Rational const& r) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    if (den == 1) {
      return num.str();
    }
    return num.str() + "/" + den.str();
  }

  BigInt floor_div(BigInt const& a, BigInt const& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
      --q;
    }
    return q;
  }

  BigInt floor_mod(BigInt const& a, BigInt const& b) {
    return a - floor_div(a, b) * b;
  }

  RatMatrix::RatMatrix(std::size_t n) : _n(n), _e(n * n) {}

  RatMatrix::RatMatrix(std::size_t n, std::vector<Rational> entries)
      : _n(n), _e(std::move(entries)) {
    if (_e.size() != n * n) {
      throw UsageError("matrix entry count does not match dimension");
    }
  }

  RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 1;
    }
    return m;
  }

  RatMatrix RatMatrix::operator*(RatMatrix const& o) const {
    if (_n != o._n) {
      throw UsageError("matrix dimension mismatch");
    }
    RatMatrix r(_n);
    for (std::size_t i = 0; i < _n; ++i) {
      for (std::size_t k = 0; k < _n; ++k) {
        auto const& a = (*this)(i, k);
        if (a == 0) {
          continue;
        }
        for (std::size_t j = 0; j < _n; ++j) {
          r(i, j) += a * o(k, j);
        }
      }
    }
    return r;
  }

  Rational RatMatrix::determinant() const {
    RatMatrix m   = *this;
    Rational  det = 1;
    for (std::size_t c = 0; c < _n; ++c) {
      std::size_t p = c;
      while (p < _n && m(p, c) == 0) {
        ++p;
      }
      if (p == _n) {
        return 0;
      }
      if (p != c) {
        for (std::size_t j = 0; j < _n; ++j) {
          std::swap(m(p, j), m(c, j));
        }
        det = -det;
      }
      det *= m(c, c);
      for (std::size_t r = c + 1; r < _n; ++r) {
        if (m(r, c) == 0) {
          continue;
        }
        Rational f = m(r, c) / m(c, c);
        for (std::size_t j = c; j < _n; ++j) {
          m(r, j) -= f * m(c, j);
        }
      }
    }
    return det;
  }

  RatMatrix RatMatrix::inverse() const {
    RatMatrix m   = *this;
    RatMatrix inv = identity(_n);
    for (std::size_t c = 0; c < _n; ++c) {
      std::size_t p = c;
      while (p < _n && m(p, c) == 0) {
        ++p;
      }
      if (p == _n) {
        throw DomainError("singular matrix " + str());
      }
      if (p != c) {
        for (std::size_t j = 0; j < _n; ++j) {
          std::swap(m(p, j), m(c, j));
          std::swap(inv(p, j), inv(c, j));
        }
      }
      Rational piv = m(c, c);
      for (std::size_t j = 0; j < _n; ++j) {
        m(c, j) /= piv;
        inv(c, j) /= piv;
      }
      for (std::size_t r = 0; r < _n; ++r) {
        if (r == c || m(r, c) == 0) {
          continue;
        }
        Rational f = m(r, c);
        for (std::size_t j = 0; j < _n; ++j) {
          m(r, j) -= f * m(c, j);
          inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

  std::string RatMatrix::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < _n; ++i) {
      out += i ? ",[" : "[";
      for (std::size_t j = 0; j < _n; ++j) {
        out += (j ? "," : "") + to_string((*this)(i, j));
      }
      out += "]";
    }
    return out + "]";
  }

}  // namespace cayley
