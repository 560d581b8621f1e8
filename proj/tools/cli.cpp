// cayley: batch front end for the representation library.
//
// Exit codes: 0 success, 1 other failure, 2 parse error, 3 budget or
// faithfulness violation, 4 oracle disagreement or failed check.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cayley/checks.hpp"
#include "cayley/errors.hpp"
#include "cayley/expr.hpp"
#include "cayley/groups.hpp"
#include "cayley/metrics.hpp"
#include "cayley/oracle.hpp"
#include "cayley/pftm.hpp"

using namespace cayley;
using nlohmann::json;

namespace {
  constexpr int kOk = 0, kOther = 1, kParse = 2, kBudget = 3, kDisagree = 4;

  // Formats on stdout are versioned; bump when columns change.
  constexpr char const* kFormatVersion = "1";

  struct Globals {
    bool          json_out = false;
    std::uint64_t seed     = 1;
    unsigned      threads  = 1;
  };

  RepPtr group(std::string const& expr) {
    return parse_group(expr, default_expr_options());
  }

  Word parse_or_throw(AlphabetPtr const& a, std::string const& text) {
    try {
      return parse_word_loose(a, text);
    } catch (ParseError const&) {
      throw;
    } catch (UsageError const& e) {
      throw ParseError(std::string("word: ") + e.what(), 0);
    }
  }

  json report_json(StepReport const& r) {
    return {{"inputLength", r.input_length}, {"multiplierSteps", r.multiplier_steps},
            {"fetchSteps", r.fetch_steps},   {"total", r.total},
            {"bounded", r.bounded}};
  }

  std::string report_text(StepReport const& r) {
    std::ostringstream out;
    out << "steps\t" << r.total << "\tinput " << r.input_length << ", fetch " << r.fetch_steps
        << ", multipliers";
    for (auto s : r.multiplier_steps) {
      out << ' ' << s;
    }
    if (!r.bounded) {
      out << " (no polynomial bound without a quasigeodesic constant)";
    }
    return out.str();
  }

  // "2,4,...,1024" continues the progression of the two preceding lengths,
  // geometric when they have an integer ratio above 1, arithmetic otherwise.
  std::vector<int> parse_lens(std::string const& text) {
    std::vector<int>  out;
    std::stringstream ss(text);
    std::string       item;
    bool              gap = false;
    while (std::getline(ss, item, ',')) {
      if (item == "..." || item == "…") {
        if (out.size() < 2 || gap) {
          throw ParseError("'...' needs two lengths before it in '" + text + "'", 0);
        }
        gap = true;
        continue;
      }
      int n = 0;
      try {
        std::size_t used = 0;
        n                = std::stoi(item, &used);
        if (used != item.size() || n < 0) {
          throw std::invalid_argument(item);
        }
      } catch (std::logic_error const&) {
        throw ParseError("bad length '" + item + "' in '" + text + "'", 0);
      }
      if (gap) {
        int  a = out[out.size() - 2], b = out.back();
        bool geometric = a > 0 && b > a && b % a == 0;
        for (long x = geometric ? 1L * b * (b / a) : 2L * b - a; x < n && x > b;
             x = geometric ? x * (b / a) : x + (b - a)) {
          out.push_back(static_cast<int>(x));
        }
        gap = false;
      }
      out.push_back(n);
    }
    if (gap || out.empty()) {
      throw ParseError("bad length list '" + text + "'", 0);
    }
    return out;
  }

  int cmd_nf(Globals const& g, std::string const& expr, std::string const& word) {
    auto rep = group(expr);
    auto v   = parse_or_throw(rep->gens.symbols, word);
    auto r   = normal_form(*rep, v);
    if (g.json_out) {
      std::cout << json{{"normalForm", r.word.str()}, {"steps", report_json(r.report)}}.dump()
                << '\n';
    } else {
      std::cout << (r.word.empty() ? "eps" : r.word.str()) << '\n' << report_text(r.report) << '\n';
    }
    return kOk;
  }

  int cmd_wp(Globals const& g, std::string const& expr, std::string const& word) {
    auto rep = group(expr);
    bool id  = word_problem(*rep, parse_or_throw(rep->gens.symbols, word));
    if (g.json_out) {
      std::cout << json{{"identity", id}}.dump() << '\n';
    } else {
      std::cout << (id ? "true" : "false") << '\n';
    }
    return kOk;
  }

  int cmd_mul(Globals const& g, std::string const& expr, std::string const& word,
              std::string const& gen) {
    auto rep = group(expr);
    auto w   = parse_or_throw(rep->sigma, word);
    auto s   = rep->gens.symbols->find(gen);
    if (!s) {
      throw ParseError("unknown generator '" + gen + "'", 0);
    }
    auto [x, r] = multiply_by_generator(*rep, w, *s);
    if (g.json_out) {
      std::cout << json{{"result", x.str()}, {"steps", report_json(r)}}.dump() << '\n';
    } else {
      std::cout << (x.empty() ? "eps" : x.str()) << '\n' << report_text(r) << '\n';
    }
    return kOk;
  }

  int cmd_enum(Globals const& g, std::string const& expr, int radius) {
    auto                 rep = group(expr);
    NormalFormEnumerator e(rep, radius);
    json                 rows = json::array();
    if (!g.json_out) {
      std::cout << "depth\tnormal_form\n";
    }
    while (auto w = e.next()) {
      auto text = w->empty() ? std::string("eps") : w->str();
      if (g.json_out) {
        rows.push_back({{"depth", e.depth()}, {"normalForm", text}});
      } else {
        std::cout << e.depth() << '\t' << text << '\n';
      }
    }
    if (g.json_out) {
      std::cout << json{{"radius", radius}, {"elements", rows.size()}, {"rows", rows}}.dump() << '\n';
    }
    return kOk;
  }

  int cmd_htable(Globals const& g, std::string const& expr, std::string const& alpha_path, int max_n) {
    auto rep   = group(expr);
    auto alpha = SymbolWeighting::load(*rep, alpha_path);
    auto emit  = [&](DistanceTable const& t) {
      if (g.json_out) {
        std::cout << t.summary().dump() << '\n';
      } else {
        std::cout << t.tsv();
      }
    };
    try {
      emit(h_function(*rep, alpha, rep->oracle, max_n));
    } catch (PartialTableError const& e) {
      emit(e.resolved());
      throw;
    }
    return kOk;
  }

  int cmd_qcheck(Globals const& g, std::string const& expr, int radius, int witness) {
    auto rep = group(expr);
    auto r   = quasigeodesic_check(rep, rep->oracle, radius);
    json j{{"radius", r.radius}, {"elements", r.elements}, {"C", r.C},
           {"declaredC", rep->quasigeodesic_c ? json(*rep->quasigeodesic_c) : json(nullptr)}};
    auto point = [](QuasigeodesicReport::Point const& p) {
      return json{{"normalForm", p.normal_form.str()}, {"geodesic", p.geodesic.str()},
                  {"distance", p.distance}, {"length", p.normal_form.size()}};
    };
    if (r.worst) {
      j["worst"] = point(*r.worst);
    }
    if (r.violation) {
      j["violation"] = point(*r.violation);
    }
    std::vector<GrowthPoint> growth;
    if (witness > 0) {
      if (rep->name.rfind("bs:", 0) != 0) {
        throw UsageError("--witness is defined for bs:p:q only");
      }
      OraclePtr cross = rep->name.rfind("bs:1:", 0) == 0
                            ? bs_matrix_oracle(std::stoi(rep->name.substr(5)))
                            : rep->oracle;
      growth = growth_witness(*rep, [&](int n) { return bs_conjugate_word(*rep, n); }, witness, cross);
      json rows = json::array();
      for (auto const& p : growth) {
        rows.push_back({{"n", p.n}, {"inputLength", p.input_length}, {"nfLength", p.nf_length},
                        {"ratio", p.ratio}});
      }
      j["growth"] = rows;
    }
    if (g.json_out) {
      std::cout << j.dump() << '\n';
    } else {
      std::cout << "radius\t" << r.radius << "\nelements\t" << r.elements << "\nC\t" << r.C << '\n';
      if (rep->quasigeodesic_c) {
        std::cout << "declared C\t" << *rep->quasigeodesic_c << '\n';
      }
      if (r.worst) {
        std::cout << "worst\t" << r.worst->normal_form.str() << "\t(distance " << r.worst->distance
                  << ")\n";
      }
      if (r.violation) {
        std::cout << "violation\t" << r.violation->normal_form.str() << "\t(distance "
                  << r.violation->distance << ")\n";
      }
      if (!growth.empty()) {
        std::cout << "n\t|v|\t|nf|\tratio\n";
        for (auto const& p : growth) {
          std::cout << p.n << '\t' << p.input_length << '\t' << p.nf_length << '\t' << p.ratio
                    << '\n';
        }
      }
    }
    return r.violation ? kDisagree : kOk;
  }

  int cmd_check(Globals const& g, std::string const& expr, CheckOptions opt) {
    opt.seed      = g.seed;
    auto results  = run_checks(group(expr), opt);
    int  code     = kOk;
    json rows     = json::array();
    for (auto const& r : results) {
      std::string verdict = r.passed() ? "PASS" : "FAIL";
      if (!r.passed()) {
        int c = r.outcome == CheckResult::Outcome::Budget ? kBudget : kDisagree;
        code  = std::max(code, c);
        std::cerr << r.name << ": " << r.detail << '\n';
      }
      if (g.json_out) {
        rows.push_back({{"name", r.name}, {"passed", r.passed()}, {"checked", r.checked},
                        {"detail", r.detail}});
      } else {
        std::cout << verdict << '\t' << r.name << '\t' << r.checked << '\n';
      }
    }
    if (g.json_out) {
      std::cout << json{{"checks", rows}, {"passed", code == kOk}}.dump() << '\n';
    }
    return code;
  }

  int cmd_bench(Globals const& g, std::string const& expr, std::string const& lens_text,
                int per_length) {
    auto rep  = group(expr);
    auto lens = parse_lens(lens_text);
    std::mt19937_64                       rng(g.seed);
    std::uniform_int_distribution<Symbol> pick(0, static_cast<Symbol>(rep->gens.size() - 1));
    json                                  rows = json::array();
    double                                c2   = 0;
    if (!g.json_out) {
      std::cout << "length\tmax_steps\tsteps/length^2\n";
    }
    for (int n : lens) {
      std::uint64_t worst = 0;
      for (int i = 0; i < per_length; ++i) {
        Word v(rep->gens.symbols);
        for (int j = 0; j < n; ++j) {
          v.push_back(pick(rng));
        }
        worst = std::max(worst, normal_form(*rep, v).report.total);
      }
      double ratio = n > 0 ? static_cast<double>(worst) / (static_cast<double>(n) * n) : 0;
      c2           = std::max(c2, ratio);
      if (g.json_out) {
        rows.push_back({{"length", n}, {"maxSteps", worst}, {"ratio", ratio}});
      } else {
        std::cout << n << '\t' << worst << '\t' << ratio << '\n';
      }
    }
    std::optional<std::uint64_t> declared = rep->constants.C2;
    if (g.json_out) {
      std::cout << json{{"rows", rows}, {"fittedC2", c2},
                        {"declaredC2", declared ? json(*declared) : json(nullptr)}}
                       .dump()
                << '\n';
    } else {
      std::cout << "fitted C2\t" << c2 << '\n';
      if (declared) {
        std::cout << "declared C2\t" << *declared << '\n';
      }
    }
    if (declared && c2 > static_cast<double>(*declared)) {
      std::cerr << "measured steps exceed the declared C2 k^2 bound\n";
      return kBudget;
    }
    return kOk;
  }

  int cmd_manifest(std::string const& expr) {
    std::cout << manifest_json(*group(expr)) << '\n';
    return kOk;
  }

  int cmd_ball(Globals const& g, std::string const& expr, int radius) {
    auto rep  = group(expr);
    auto ball = bfs_ball(rep->oracle, radius);
    if (g.json_out) {
      std::vector<std::size_t> sizes(static_cast<std::size_t>(radius) + 1, 0);
      for (std::size_t i = 0; i < ball.size(); ++i) {
        ++sizes[static_cast<std::size_t>(ball.depth(i))];
      }
      std::cout << json{{"radius", radius}, {"elements", ball.size()}, {"spheres", sizes}}.dump()
                << '\n';
    } else {
      std::cout << ball.tsv();
    }
    return kOk;
  }

  ShippedProgram shipped(std::string const& name) {
    if (name == "append-x") {
      return append_x_program();
    }
    if (name == "unary-times-a" || name == "unary-times-a'") {
      return unary_times_a(Alphabet::make({"a", "a'"}), name.back() == '\'');
    }
    if (name == "lamplighter-times-b") {
      return lamplighter_times_b(lamplighter_alphabet());
    }
    throw UsageError("unknown shipped program '" + name
                     + "' (append-x, unary-times-a, unary-times-a', lamplighter-times-b)");
  }

  int cmd_tm(Globals const& g, std::string const& program, std::string const& input,
             std::string const& exported, bool check_only) {
    if (!exported.empty()) {
      std::cout << program_to_json(shipped(exported).program) << '\n';
      return kOk;
    }
    if (program.empty()) {
      throw UsageError("tm needs a program file or --export");
    }
    std::ifstream in(program);
    if (!in) {
      throw UsageError("cannot open program '" + program + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto prog = [&] {
      try {
        return program_from_json(buf.str());
      } catch (json::parse_error const& e) {
        throw ParseError(program + ": " + e.what(), e.byte);
      }
    }();
    auto verdict = check_position_faithful(prog);
    if (!verdict.faithful) {
      for (auto const& o : verdict.offending) {
        std::cerr << "not position-faithful: " << o << '\n';
      }
      if (g.json_out) {
        std::cout << json{{"faithful", false}, {"offending", verdict.offending}}.dump() << '\n';
      } else {
        std::cout << "faithful\tfalse\n";
      }
      return kBudget;
    }
    if (check_only) {
      std::cout << (g.json_out ? json{{"faithful", true}}.dump() : std::string("faithful\ttrue"))
                << '\n';
      return kOk;
    }
    auto r = run(prog, parse_or_throw(prog.alphabet(), input), TimeBudget::unlimited());
    if (g.json_out) {
      std::cout << json{{"output", r.output.str()}, {"steps", r.steps}}.dump() << '\n';
    } else {
      std::cout << (r.output.empty() ? "eps" : r.output.str()) << "\nsteps\t" << r.steps << '\n';
    }
    return kOk;
  }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("cayley: Cayley representations of groups (output format v")
               + kFormatVersion + ")"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json_out, "machine-readable JSON output");
  app.add_option("--seed", g.seed, "seed for randomized suites")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (computation is sequential)")
      ->capture_default_str();
  app.footer(
      "Groups: lamplighter, lamplighter:tm, bs:p:q, heisenberg, zk:k, zn:n, matrix:<file>,\n"
      "        dp(G,H), fp(G,H), ext(G,<table.json>), sub(G, x=word, ...)\n"
      "Files are searched in the working directory, $CAYLEY_PATH, then the bundled data.\n"
      "Formats: htable TSV 'n<TAB>h'; enum TSV 'depth<TAB>normal_form'; ball TSV\n"
      "'element<TAB>distance'; --json emits one JSON object per command.\n"
      "Exit codes: 0 ok, 1 error, 2 parse error, 3 budget or faithfulness, 4 disagreement.");

  std::string expr, word, gen, alpha = "paper", lens = "2,4,...,1024", program, input, exported;
  int         radius = 3, max_n = 12, witness = 0, per_length = 8;
  bool        check_only = false;
  CheckOptions copt;

  auto* nf = app.add_subcommand("nf", "normal form of a generator word, with step report");
  nf->add_option("expr", expr)->required();
  nf->add_option("word", word)->required();
  auto* wp = app.add_subcommand("wp", "word problem: does the word represent e");
  wp->add_option("expr", expr)->required();
  wp->add_option("word", word)->required();
  auto* mul = app.add_subcommand("mul", "apply one multiplier to a normal form");
  mul->add_option("expr", expr)->required();
  mul->add_option("normal_form", word)->required();
  mul->add_option("generator", gen)->required();
  auto* en = app.add_subcommand("enum", "normal forms of all words up to a radius");
  en->add_option("expr", expr)->required();
  en->add_option("--radius", radius)->capture_default_str();
  auto* ht = app.add_subcommand("htable", "Cayley distance function table");
  ht->add_option("expr", expr)->required();
  ht->add_option("--alpha", alpha, "JSON symbol->word file or 'paper'")->capture_default_str();
  ht->add_option("--max", max_n)->capture_default_str();
  auto* qc = app.add_subcommand("qcheck", "quasigeodesic constant over a ball");
  qc->add_option("expr", expr)->required();
  qc->add_option("--radius", radius)->capture_default_str();
  qc->add_option("--witness", witness, "bs: t^n a t^-n growth up to n");
  auto* ck = app.add_subcommand("check", "invariant suite against the oracle");
  ck->add_option("expr", expr)->required();
  ck->add_option("--radius", copt.radius)->capture_default_str();
  ck->add_option("--samples", copt.samples)->capture_default_str();
  ck->add_option("--length", copt.sample_length, "random word length")->capture_default_str();
  auto* be = app.add_subcommand("bench", "normal_form step counts against k^2");
  be->add_option("expr", expr)->required();
  be->add_option("--lens", lens, "comma list; '...' continues the progression")
      ->capture_default_str();
  be->add_option("--per-length", per_length)->capture_default_str();
  auto* ma = app.add_subcommand("manifest", "representation manifest as JSON");
  ma->add_option("expr", expr)->required();
  auto* tm = app.add_subcommand("tm", "run or check a position-faithful program");
  tm->add_option("program", program, "program JSON file");
  tm->add_option("input", input)->default_val("eps");
  tm->add_flag("--check", check_only, "static check only");
  tm->add_option("--export", exported, "print a shipped program as JSON");
  auto* ba = app.add_subcommand("ball", "oracle ball (element, distance)");
  ba->add_option("expr", expr)->required();
  ba->add_option("--radius", radius)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*nf) return cmd_nf(g, expr, word);
    if (*wp) return cmd_wp(g, expr, word);
    if (*mul) return cmd_mul(g, expr, word, gen);
    if (*en) return cmd_enum(g, expr, radius);
    if (*ht) return cmd_htable(g, expr, alpha, max_n);
    if (*qc) return cmd_qcheck(g, expr, radius, witness);
    if (*ck) return cmd_check(g, expr, copt);
    if (*be) return cmd_bench(g, expr, lens, per_length);
    if (*ma) return cmd_manifest(expr);
    if (*tm) return cmd_tm(g, program, input, exported, check_only);
    if (*ba) return cmd_ball(g, expr, radius);
  } catch (ParseError const& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (BudgetExceeded const& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (FaithfulnessError const& e) {
    std::cerr << "faithfulness violation: " << e.what() << '\n';
    return kBudget;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
