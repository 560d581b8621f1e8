// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "cayley/combinators.hpp"
#include "cayley/errors.hpp"
#include "cayley/expr.hpp"
#include "cayley/groups.hpp"
#include "cayley/metrics.hpp"
#include "cayley/oracle.hpp"
#include "cayley/pftm.hpp"

using namespace cayley;

namespace {
  using Clock = std::chrono::steady_clock;

  int failures = 0;

  double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  void report(int n, bool ok, std::string const& detail) {
    std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }

  // Every word over `a` of length <= max_len, shorter words first within
  // each branch.
  void each_word(AlphabetPtr const& a, int max_len, std::function<void(Word const&)> const& f) {
    Word                  w(a);
    std::function<void()> walk = [&] {
      f(w);
      if (static_cast<int>(w.size()) == max_len) {
        return;
      }
      for (Symbol s = 0; s < a->size(); ++s) {
        if (!a->contains(s)) {
          continue;
        }
        w.letters().push_back(s);
        walk();
        w.letters().pop_back();
      }
    };
    walk();
  }

  std::string data(std::string const& f) {
    return std::string(CAYLEY_DATA_DIR) + "/" + f;
  }

  template <class F>
  void guarded(int n, F&& f) {
    try {
      f();
    } catch (std::exception const& e) {
      report(n, false, std::string("exception: ") + e.what());
    }
  }

  // Superscript typography: a' as a⁻¹, no separators.
  std::string superscript_style(Word const& w) {
    std::string out;
    for (Symbol s : w) {
      auto n = w.alphabet()->name(s);
      out += n == "a'" ? "a⁻¹" : n;
    }
    return out;
  }

  void criterion_1() {
    auto t0 = Clock::now();
    auto g1 = superscript_style(lamplighter_encode(LampEl{{-1, 0, 2}, 1}));
    auto g2 = superscript_style(lamplighter_encode(LampEl{{-2}, 1}));
    bool ok = g1 == "a⁻¹#baba↑ab#a⁻¹" && g2 == "a⁻¹a⁻¹#baaa↑#";
    double s = seconds_since(t0);
    report(1, ok && s < 1.0, "g1 = " + g1 + ", g2 = " + g2 + ", " + std::to_string(s) + " s");
  }

  void criterion_2() {
    auto        t0  = Clock::now();
    auto        rep = lamplighter_rep();
    auto        o   = lamplighter_oracle();
    std::size_t total = 0, agree = 0;
    each_word(rep->gens.symbols, 8, [&](Word const& v) {
      ++total;
      bool id = evaluate_word(*o, v) == o->identity();
      agree += word_problem(*rep, v) == id ? 1 : 0;
    });
    double s = seconds_since(t0);
    report(2, agree == total && s < 10.0,
           std::to_string(agree) + "/" + std::to_string(total) + " words k <= 8, "
               + std::to_string(s) + " s");
  }

  void criterion_3() {
    auto        t0 = Clock::now();
    std::size_t total = 0, agree = 0;
    {
      auto rep   = bs_rep(1, 2);
      auto m     = bs_matrix_oracle(2);
      auto alpha = SymbolWeighting::natural(*rep);
      each_word(rep->gens.symbols, 7, [&](Word const& v) {
        ++total;
        auto r  = normal_form(*rep, v).word;
        auto gv = evaluate_word(*m, v);
        bool ok = pi_alpha(alpha, r, *m) == gv && r.empty() == (gv == m->identity());
        agree += ok ? 1 : 0;
      });
    }
    std::size_t total23 = 0, agree23 = 0;
    {
      auto rep = bs_rep(2, 3);
      each_word(rep->gens.symbols, 6, [&](Word const& v) {
        ++total23;
        auto r  = normal_form(*rep, v).word;
        auto br = britton_reduce(2, 3, v);
        bool ok = make_britton(bs_parse(2, 3, r)) == make_britton(br)
                  && r.empty() == (br.syllables.empty() && br.tail == 0);
        agree23 += ok ? 1 : 0;
      });
    }
    int relations = 0;
    for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
      auto        rep = bs_rep(p, q);
      std::string w   = "t";
      for (int i = 0; i < p; ++i) {
        w += " a";
      }
      w += " t'";
      for (int i = 0; i < q; ++i) {
        w += " a'";
      }
      relations += word_problem(*rep, generator_word(*rep, w)) ? 1 : 0;
    }
    double s = seconds_since(t0);
    report(3, agree == total && agree23 == total23 && relations == 3 && s < 60.0,
           "BS(1,2) " + std::to_string(agree) + "/" + std::to_string(total) + " (k <= 7), BS(2,3) "
               + std::to_string(agree23) + "/" + std::to_string(total23) + " (k <= 6), relations "
               + std::to_string(relations) + "/3, " + std::to_string(s) + " s");
  }

  void criterion_4() {
    std::size_t checks = 0, violations = 0, multipliers = 0;
    std::string where;
    for (auto const* e : {"lamplighter", "zk:2", "zk:3", "zk:10", "zn:1", "zn:2"}) {
      auto rep   = parse_group(e, default_expr_options());
      auto forms = enumerate_normal_forms(rep, 8);
      for (std::size_t s = 0; s < rep->multipliers.size(); ++s) {
        auto const& t = rep->multipliers[s].transducer_ptr();
        if (!t) {
          continue;
        }
        ++multipliers;
        auto const k = static_cast<std::size_t>(t->state_count());
        for (auto const& w : forms) {
          auto out  = evaluate(*t, w).output;
          auto diff = out.size() > w.size() ? out.size() - w.size() : w.size() - out.size();
          ++checks;
          if (diff > k) {
            ++violations;
            where = std::string(e) + " '" + w.str() + "'";
          }
        }
      }
    }
    report(4, violations == 0 && checks > 0,
           std::to_string(multipliers) + " transducer multipliers, " + std::to_string(checks)
               + " radius-8 normal forms, " + std::to_string(violations) + " violations" + where);
  }

  void criterion_5() {
    auto            t0  = Clock::now();
    auto            rep = lamplighter_rep();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Symbol> pick(0, static_cast<Symbol>(rep->gens.size() - 1));
    double const    declared = static_cast<double>(*rep->constants.C2);
    double          fitted   = 0;
    int             over     = 0;
    for (int k = 2; k <= 1024; k += 2) {
      for (int i = 0; i < 2; ++i) {
        Word v(rep->gens.symbols);
        for (int j = 0; j < k; ++j) {
          v.push_back(pick(rng));
        }
        auto   steps = normal_form(*rep, v).report.total;
        double ratio = static_cast<double>(steps) / (static_cast<double>(k) * k);
        fitted       = std::max(fitted, ratio);
        over += ratio > declared ? 1 : 0;
      }
    }
    double s = seconds_since(t0);
    std::ostringstream d;
    d << "fitted C2 = " << fitted << ", manifest C2 = " << declared << ", " << over
      << " lengths above the bound, " << s << " s";
    report(5, over == 0 && s < 120.0, d.str());
  }

  void criterion_6() {
    auto lamp = lamplighter_rep();
    auto q    = quasigeodesic_check(lamp, lamp->oracle, 6);
    bool pos  = !q.violation && q.elements > 1;

    auto bs     = bs_rep(1, 2);
    auto growth = growth_witness(*bs, [&](int n) { return bs_conjugate_word(*bs, n); }, 14,
                                 bs_matrix_oracle(2));
    bool neg    = growth.size() == 15;
    for (auto const& g : growth) {
      neg = neg && g.nf_length == (std::size_t{1} << g.n) && g.input_length == 2 * std::size_t(g.n) + 1;
    }
    std::ostringstream d;
    d << "lamplighter radius 6: " << q.elements << " elements, manifest C = "
      << *lamp->quasigeodesic_c << ", minimal C = " << q.C
      << (q.violation ? ", violated" : ", holds") << "; BS(1,2) |nf(t^14 a t^-14)| = "
      << growth.back().nf_length << ", ratio " << growth.back().ratio;
    report(6, pos && neg, d.str());
  }

  void criterion_7() {
    auto lamp = lamplighter_rep();
    auto t    = h_function(*lamp, SymbolWeighting::natural(*lamp), lamp->oracle, 12);
    bool ok   = t.vanishes() && t.max_n == 12;
    std::ostringstream d;
    d << "lamplighter n <= 12 over " << t.words << " normal forms: " << (t.vanishes() ? "0" : "nonzero");
    for (auto [p, q] : {std::pair{1, 2}, {2, 3}}) {
      auto bs = bs_rep(p, q);
      auto u  = h_function(*bs, SymbolWeighting::natural(*bs), bs->oracle, 10);
      ok      = ok && u.vanishes() && u.max_n == 10;
      d << "; BS(" << p << "," << q << ") n <= 10 over " << u.words << ": "
        << (u.vanishes() ? "0" : "nonzero");
    }
    auto alpha = SymbolWeighting::natural(*lamp);
    alpha.set(*lamp, "b", "a");
    auto c       = h_function(*lamp, alpha, lamp->oracle, 4);
    bool control = !c.h.empty() && c.h.back() >= 1;
    d << "; perturbed α(b) = a: h(4) = " << (c.h.empty() ? -1 : c.h.back());
    report(7, ok && control, d.str());
  }

  void criterion_8() {
    auto            rep = heisenberg_rep();
    auto            o   = heisenberg_oracle();
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long> coord(-1'000'000, 1'000'000);
    std::size_t     total = 0, agree = 0;
    auto            as_matrix = [](std::vector<BigInt> const& x) {
      return make_matrix(RatMatrix(3, {1, Rational(x[0]), Rational(x[2]), 0, 1, Rational(x[1]), 0, 0, 1}));
    };
    for (int i = 0; i < 10'000; ++i) {
      std::vector<BigInt> x{coord(rng), coord(rng), coord(rng)};
      auto                w = coordinates_encode(x, rep->sigma);
      auto                g = as_matrix(x);
      for (Symbol s = 0; s < rep->gens.size(); ++s) {
        ++total;
        auto out = rep->multipliers[s].apply(w).word;
        agree += rep->decode(out) == o->act(g, s) ? 1 : 0;
      }
    }
    std::size_t words = 0, wagree = 0;
    each_word(rep->gens.symbols, 5, [&](Word const& v) {
      ++words;
      wagree += rep->decode(normal_form(*rep, v).word) == evaluate_word(*o, v) ? 1 : 0;
    });
    report(8, agree == total && wagree == words,
           std::to_string(agree) + "/" + std::to_string(total) + " multiplications at random points, "
               + std::to_string(wagree) + "/" + std::to_string(words) + " words k <= 5");
  }

  void criterion_9() {
    std::mt19937_64 rng(9);
    std::size_t     total = 0, agree = 0, trips = 0, trips_ok = 0;
    for (int k : {2, 3, 10}) {
      auto sigma  = zk_alphabet(k);
      auto random = [&] {
        std::uniform_int_distribution<long> num(-1'000'000, 1'000'000);
        std::uniform_int_distribution<int>  ex(0, 5);
        BigInt                              den = 1;
        for (int e = ex(rng); e > 0; --e) {
          den *= k;
        }
        return Rational(num(rng)) / Rational(den);
      };
      for (int i = 0; i < 10'000; ++i) {
        Rational x = random(), y = random();
        auto     wx = zk_encode(k, x, sigma), wy = zk_encode(k, y, sigma);
        ++total;
        agree += zk_decode(k, zk_add(k, wx, wy)).value() == x + y ? 1 : 0;
        trips += 2;
        trips_ok += zk_decode(k, wx).value() == x ? 1 : 0;
        trips_ok += zk_encode(zk_decode(k, wy), sigma) == wy ? 1 : 0;
      }
    }
    report(9, agree == total && trips == trips_ok,
           std::to_string(agree) + "/" + std::to_string(total) + " sums over k in {2,3,10}, "
               + std::to_string(trips_ok) + "/" + std::to_string(trips) + " round trips");
  }

  void criterion_10() {
    auto        opt = default_expr_options();
    std::ostringstream d;
    bool        ok = true;
    auto tally = [&](std::string const& label, std::size_t good, std::size_t all) {
      ok = ok && good == all && all > 0;
      d << (d.tellp() > 0 ? "; " : "") << label << " " << good << "/" << all;
    };
    {
      auto        dp = parse_group("dp(zn:1, zn:1)", opt);
      auto        o  = pair_oracle(free_oracle({"a"}), free_oracle({"b"}), dp->gens.symbols);
      std::size_t n = 0, good = 0;
      each_word(dp->gens.symbols, 8, [&](Word const& v) {
        ++n;
        bool id = evaluate_word(*o, v) == o->identity();
        good += word_problem(*dp, v) == id ? 1 : 0;
      });
      tally("dp", good, n);
    }
    {
      auto        fp = parse_group("fp(zn:1, zn:1)", opt);
      auto        o  = free_oracle({"a", "b"});
      std::size_t n = 0, good = 0, blocks_ok = 0;
      each_word(fp->gens.symbols, 8, [&](Word const& v) {
        ++n;
        auto nf     = normal_form(*fp, v).word;
        auto blocks = free_product_blocks(*fp, nf);
        bool alt    = true;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
          alt = alt && !blocks[i].second.empty() && (i == 0 || blocks[i].first != blocks[i - 1].first);
        }
        blocks_ok += alt ? 1 : 0;
        bool id = evaluate_word(*o, v.str()) == o->identity();
        good += nf.empty() == id && fp->decode(nf) == evaluate_word(*fp->oracle, v) ? 1 : 0;
      });
      tally("fp", good, n);
      tally("fp blocks", blocks_ok, n);
    }
    {
      auto        zn    = parse_group("zn:1", opt);
      auto        table = read_extension_table(*zn, data("dihedral.json"));
      auto        ext   = finite_extension(zn, table);
      std::size_t n = 0, good = 0;
      each_word(ext->gens.symbols, 8, [&](Word const& v) {
        ++n;
        bool id = evaluate_word(*table.oracle, v.str()) == table.oracle->identity();
        good += word_problem(*ext, v) == id ? 1 : 0;
      });
      tally("ext", good, n);
    }
    {
      auto        sub = parse_group("sub(fp(zn:1,zn:1), x=aa, y=bb)", opt);
      auto        o   = free_oracle({"a", "b"});
      std::size_t n = 0, good = 0;
      each_word(sub->gens.symbols, 6, [&](Word const& v) {
        ++n;
        std::string parent;
        for (Symbol s : v) {
          auto name = sub->gens.symbols->name(s);
          parent += name == "x" ? "a a " : name == "x'" ? "a' a' " : name == "y" ? "b b " : "b' b' ";
        }
        bool id = evaluate_word(*o, parent.empty() ? std::string("eps") : parent) == o->identity();
        good += word_problem(*sub, v) == id ? 1 : 0;
      });
      tally("sub", good, n);
    }
    report(10, ok, d.str());
  }

  void criterion_11() {
    auto        rep   = zk_rep(2);
    auto const& t     = *rep->multipliers[0].transducer_ptr();
    Dfa const&  lang  = *rep->language.dfa;
    Dfa         rel   = relation_automaton(t, lang);
    auto const& sigma = rep->sigma;
    auto const& pairs = rel.alphabet();
    std::vector<Word> words;
    each_word(sigma, 6, [&](Word const& w) { words.push_back(w); });

    std::size_t pairs_checked = 0, errors = 0, accepted = 0;
    std::string first;
    for (auto const& u : words) {
      std::optional<Word> fu;
      if (lang.accepts(u)) {
        fu = evaluate(t, u).output;
      }
      // Depth-first over v, sharing the run on common prefixes.
      Word                     v(sigma);
      std::function<void(int)> walk = [&](int q) {
        // finish the run on (u_i, pad) when v stops here
        int r = q;
        for (std::size_t i = v.size(); i < u.size() && r >= 0; ++i) {
          std::array<Symbol, 2> c{u[i], kPad};
          r = rel.next(r, pairs->compose(c));
        }
        bool acc = r >= 0 && rel.accepting(r);
        bool exp = fu && *fu == v;
        ++pairs_checked;
        accepted += acc ? 1 : 0;
        if (acc != exp) {
          ++errors;
          if (first.empty()) {
            first = " first: u = '" + u.str() + "', v = '" + v.str() + "'";
          }
        }
        if (v.size() == 6) {
          return;
        }
        for (Symbol s = 0; s < sigma->size(); ++s) {
          int next = -1;
          if (q >= 0) {
            std::array<Symbol, 2> c{v.size() < u.size() ? u[v.size()] : kPad, s};
            next = rel.next(q, pairs->compose(c));
          }
          v.letters().push_back(s);
          walk(next);
          v.letters().pop_back();
        }
      };
      walk(rel.start());
    }
    report(11, errors == 0 && pairs_checked == words.size() * words.size(),
           std::to_string(pairs_checked) + " pairs (u, v), " + std::to_string(accepted)
               + " accepted, " + std::to_string(errors) + " errors" + first);
  }

  void criterion_12() {
    namespace fs = std::filesystem;
    std::vector<ShippedProgram> shipped{append_x_program(),
                                        unary_times_a(Alphabet::make({"a", "a'"}), false),
                                        unary_times_a(Alphabet::make({"a", "a'"}), true),
                                        lamplighter_times_b(lamplighter_alphabet())};
    bool        statics = true;
    std::size_t files = 0;
    bool        broken_rejected = false;
    for (auto const& entry : fs::directory_iterator(data("programs"))) {
      std::ifstream     in(entry.path());
      std::stringstream buf;
      buf << in.rdbuf();
      auto verdict = check_position_faithful(program_from_json(buf.str()));
      if (entry.path().filename().string().rfind("broken", 0) == 0) {
        broken_rejected = !verdict.faithful;
      } else {
        ++files;
        statics = statics && verdict.faithful;
      }
    }
    for (auto const& p : shipped) {
      statics = statics && check_position_faithful(p.program).faithful;
    }

    std::mt19937_64 rng(12);
    std::size_t     runs = 0, violations = 0, accepted = 0;
    for (int i = 0; i < 100'000; ++i) {
      auto const& p = shipped[static_cast<std::size_t>(i) % shipped.size()];
      auto const& a = p.program.alphabet();
      std::uniform_int_distribution<int>    len(0, 24);
      std::uniform_int_distribution<Symbol> pick(0, static_cast<Symbol>(a->size() - 1));
      Word                                  w(a);
      for (int j = len(rng); j > 0; --j) {
        w.push_back(pick(rng));
      }
      // Every other lamplighter run uses a genuine normal form.
      if (&p == &shipped.back() && i % 2 == 0) {
        LampEl g;
        std::uniform_int_distribution<long> pos(-6, 6);
        g.z = pos(rng);
        for (int j = 0; j < 4; ++j) {
          g.lit.insert(pos(rng));
        }
        w = lamplighter_encode(g);
      }
      ++runs;
      try {
        run(p.program, w, p.budget);
        ++accepted;
      } catch (FaithfulnessError const&) {
        ++violations;
      } catch (DomainError const&) {
      } catch (BudgetExceeded const&) {
      }
    }
    report(12, statics && broken_rejected && violations == 0 && files >= shipped.size(),
           std::to_string(files + shipped.size()) + " programs statically faithful, broken fixture "
               + (broken_rejected ? "rejected" : "accepted") + ", " + std::to_string(runs)
               + " fuzz runs (" + std::to_string(accepted) + " accepted), "
               + std::to_string(violations) + " marker violations");
  }
}  // namespace

int main() {
  guarded(1, criterion_1);
  guarded(2, criterion_2);
  guarded(3, criterion_3);
  guarded(4, criterion_4);
  guarded(5, criterion_5);
  guarded(6, criterion_6);
  guarded(7, criterion_7);
  guarded(8, criterion_8);
  guarded(9, criterion_9);
  guarded(10, criterion_10);
  guarded(11, criterion_11);
  guarded(12, criterion_12);
  return failures == 0 ? 0 : 1;
}
