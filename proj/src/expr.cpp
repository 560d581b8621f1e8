#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>

#include "cayley/combinators.hpp"
#include "cayley/errors.hpp"
#include "cayley/expr.hpp"
#include "cayley/groups.hpp"

namespace cayley {

  namespace {
    class Parser {
     public:
      Parser(std::string_view text, ExprOptions const& opt) : _s(text), _opt(opt) {}

      RepPtr top() {
        auto r = expr();
        skip();
        if (_i != _s.size()) {
          fail("unexpected '" + std::string(1, _s[_i]) + "'");
        }
        return r;
      }

     private:
      std::string_view   _s;
      ExprOptions const& _opt;
      std::size_t        _i = 0;

      [[noreturn]] void fail(std::string const& msg, std::size_t at) const {
        throw ParseError("group expression: " + msg, at);
      }
      [[noreturn]] void fail(std::string const& msg) const {
        fail(msg, _i);
      }

      void skip() {
        while (_i < _s.size() && std::isspace(static_cast<unsigned char>(_s[_i]))) {
          ++_i;
        }
      }

      void expect(char c) {
        skip();
        if (_i >= _s.size() || _s[_i] != c) {
          fail(std::string("expected '") + c + "'");
        }
        ++_i;
      }

      std::string ident() {
        skip();
        std::size_t b = _i;
        while (_i < _s.size()
               && (std::isalnum(static_cast<unsigned char>(_s[_i])) || _s[_i] == '_')) {
          ++_i;
        }
        return std::string(_s.substr(b, _i - b));
      }

      // Raw text up to a top-level ',' or ')'.
      std::string raw() {
        skip();
        std::size_t b = _i;
        if (_i < _s.size() && _s[_i] == '"') {
          auto e = _s.find('"', _i + 1);
          if (e == std::string_view::npos) {
            fail("unterminated quote");
          }
          _i = e + 1;
          return std::string(_s.substr(b + 1, e - b - 1));
        }
        int depth = 0;
        while (_i < _s.size()) {
          char c = _s[_i];
          if (c == '(') {
            ++depth;
          } else if (c == ')' || c == ',') {
            if (depth == 0) {
              break;
            }
            if (c == ')') {
              --depth;
            }
          }
          ++_i;
        }
        auto t = _s.substr(b, _i - b);
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) {
          t.remove_suffix(1);
        }
        return std::string(t);
      }

      int integer(std::string const& text, std::size_t at) const {
        if (text.empty() || text.size() > 9
            || !std::all_of(text.begin(), text.end(),
                            [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          fail("expected a positive integer, got '" + text + "'", at);
        }
        return std::stoi(text);
      }

      std::string resolve(std::string const& path, std::size_t at) const {
        namespace fs = std::filesystem;
        if (path.empty()) {
          fail("missing file name", at);
        }
        if (fs::exists(path) || fs::path(path).is_absolute()) {
          return path;
        }
        for (auto const& dir : _opt.search_path) {
          auto p = fs::path(dir) / path;
          if (fs::exists(p)) {
            return p.string();
          }
        }
        return path;
      }

      // Wraps construction errors of a sub-expression with its position.
      template <class F>
      RepPtr build(std::size_t at, F&& f) {
        try {
          return f();
        } catch (ParseError const&) {
          throw;
        } catch (UsageError const& e) {
          fail(e.what(), at);
        } catch (DomainError const& e) {
          fail(e.what(), at);
        }
      }

      RepPtr expr() {
        skip();
        std::size_t at   = _i;
        auto        name = ident();
        if (name.empty()) {
          fail("expected a group name");
        }
        skip();
        if (name == "dp" || name == "fp") {
          expect('(');
          auto a = expr();
          expect(',');
          auto b = expr();
          expect(')');
          return build(at, [&] { return name == "dp" ? direct_product(a, b) : free_product(a, b); });
        }
        if (name == "ext") {
          expect('(');
          auto        h     = expr();
          expect(',');
          std::size_t pat   = (skip(), _i);
          auto        path  = resolve(raw(), pat);
          expect(')');
          return build(pat, [&] { return finite_extension(h, read_extension_table(*h, path)); });
        }
        if (name == "sub") {
          expect('(');
          auto g = expr();
          std::vector<std::pair<std::string, std::string>> gens;
          std::vector<std::size_t>                         where;
          skip();
          while (_i < _s.size() && _s[_i] == ',') {
            ++_i;
            skip();
            where.push_back(_i);
            auto n = ident();
            if (n.empty()) {
              fail("expected a generator name");
            }
            skip();
            if (_i < _s.size() && _s[_i] == '\'') {
              n += '\'';
              ++_i;
            }
            expect('=');
            std::size_t wat  = (skip(), _i);
            auto        text = raw();
            Word        w;
            try {
              w = parse_word_loose(g->gens.symbols, text);
            } catch (UsageError const& e) {
              fail(e.what(), wat);
            }
            gens.emplace_back(n, w.empty() ? "eps" : w.str());
            skip();
          }
          expect(')');
          if (gens.empty()) {
            fail("sub needs at least one generator", at);
          }
          return build(at, [&] { return subgroup(g, gens); });
        }
        // atoms with ':' parameters
        std::vector<std::string> params;
        std::vector<std::size_t> at_param;
        while (_i < _s.size() && _s[_i] == ':') {
          ++_i;
          at_param.push_back(_i);
          if (name == "matrix") {
            params.push_back(raw());
            break;
          }
          std::size_t b = _i;
          while (_i < _s.size() && _s[_i] != ':' && _s[_i] != ',' && _s[_i] != ')'
                 && !std::isspace(static_cast<unsigned char>(_s[_i]))) {
            ++_i;
          }
          params.emplace_back(_s.substr(b, _i - b));
        }
        auto arity = [&](std::size_t n) {
          if (params.size() != n) {
            fail(name + " takes " + std::to_string(n) + " parameter" + (n == 1 ? "" : "s"), at);
          }
        };
        if (name == "lamplighter") {
          if (params.size() > 1 || (params.size() == 1 && params[0] != "tm")) {
            fail("lamplighter takes no parameter or ':tm'", at);
          }
          return lamplighter_rep(!params.empty());
        }
        if (name == "heisenberg") {
          arity(0);
          return heisenberg_rep();
        }
        if (name == "bs") {
          arity(2);
          int p = integer(params[0], at_param[0]);
          int q = integer(params[1], at_param[1]);
          return build(at, [&] { return bs_rep(p, q); });
        }
        if (name == "zk") {
          arity(1);
          int k = integer(params[0], at_param[0]);
          return build(at, [&] { return zk_rep(k); });
        }
        if (name == "zn") {
          arity(1);
          int n = integer(params[0], at_param[0]);
          return build(at, [&] { return zn_rep(n); });
        }
        if (name == "matrix") {
          arity(1);
          auto path = resolve(params[0], at_param[0]);
          return build(at_param[0], [&] {
            auto stem = std::filesystem::path(path).stem().string();
            return matrix_rep(stem, read_matrix_file(path));
          });
        }
        fail("unknown group '" + name + "'", at);
      }
    };
  }  // namespace

  ExprOptions default_expr_options() {
    ExprOptions o;
    if (char const* env = std::getenv("CAYLEY_PATH")) {
      std::string_view s(env);
      while (!s.empty()) {
        auto c = s.find(':');
        auto d = s.substr(0, c);
        if (!d.empty()) {
          o.search_path.emplace_back(d);
        }
        if (c == std::string_view::npos) {
          break;
        }
        s.remove_prefix(c + 1);
      }
    }
    o.search_path.emplace_back(CAYLEY_DATA_DIR);
    return o;
  }

  RepPtr parse_group(std::string_view text, ExprOptions const& opt) {
    return Parser(text, opt).top();
  }

  Word parse_word_loose(AlphabetPtr const& alphabet, std::string_view text) {
    bool spaced = text.find_first_of(" \t\n") != std::string_view::npos;
    if (spaced || alphabet->is_product() || text == "eps" || text.empty()) {
      return Word::parse(alphabet, text);
    }
    if (alphabet->find(text)) {
      return Word(alphabet, {alphabet->at(text)});
    }
    Word        w(alphabet);
    std::size_t i = 0;
    while (i < text.size()) {
      std::size_t best = 0;
      Symbol      sym  = 0;
      for (Symbol s = 0; s < alphabet->size(); ++s) {
        auto const& n = alphabet->names()[s];
        if (n.size() > best && text.substr(i, n.size()) == n) {
          best = n.size();
          sym  = s;
        }
      }
      if (best == 0) {
        throw ParseError("no generator matches '" + std::string(text.substr(i)) + "'", i);
      }
      w.push_back(sym);
      i += best;
    }
    return w;
  }

}  // namespace cayley
