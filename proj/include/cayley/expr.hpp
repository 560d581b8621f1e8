#ifndef CAYLEY_EXPR_HPP_
#define CAYLEY_EXPR_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "cayley/representation.hpp"

namespace cayley {

  // Group expressions:
  //   expr  := atom | dp(expr, expr) | fp(expr, expr) | ext(expr, path)
  //          | sub(expr, name=word, ...)
  //   atom  := lamplighter | lamplighter:tm | bs:p:q | heisenberg | zk:k | zn:n
  //          | matrix:path
  // Relative paths are tried against the working directory, then each
  // search directory in turn. Errors are ParseError with a byte offset.
  struct ExprOptions {
    std::vector<std::string> search_path;
  };

  RepPtr parse_group(std::string_view text, ExprOptions const& opt = {});

  // Default search path: $CAYLEY_PATH entries (colon separated), then the
  // bundled data directory.
  ExprOptions default_expr_options();

  // Whitespace-separated names, or an unspaced run of names split by
  // longest match ("aab'" over {a, b, b'}). "eps" is the empty word.
  Word parse_word_loose(AlphabetPtr const& alphabet, std::string_view text);

}  // namespace cayley

#endif  // CAYLEY_EXPR_HPP_
