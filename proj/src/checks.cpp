#include <functional>
#include <optional>
#include <random>

#include "cayley/checks.hpp"
#include "cayley/errors.hpp"
#include "cayley/oracle.hpp"

namespace cayley {

  namespace {
    using Outcome = CheckResult::Outcome;

    struct Recorder {
      CheckResult r;

      explicit Recorder(std::string name) {
        r.name = std::move(name);
      }
      void fail(Outcome o, std::string detail) {
        if (r.outcome == Outcome::Pass) {
          r.outcome = o;
          r.detail  = std::move(detail);
        }
      }
      void expect(bool ok, std::string const& detail) {
        ++r.checked;
        if (!ok) {
          fail(Outcome::Disagreement, detail);
        }
      }
      // Runs f, turning budget and faithfulness errors into outcomes.
      template <class F>
      void guard(std::string const& what, F&& f) {
        try {
          f();
        } catch (BudgetExceeded const& e) {
          fail(Outcome::Budget, what + ": " + e.what());
        } catch (FaithfulnessError const& e) {
          fail(Outcome::Budget, what + ": " + e.what());
        } catch (Error const& e) {
          fail(Outcome::Disagreement, what + ": " + e.what());
        }
      }
    };

    int feasible_radius(std::size_t gens, int radius, std::size_t cap) {
      std::size_t total = 1, layer = 1;
      for (int r = 1; r <= radius; ++r) {
        layer *= gens;
        total += layer;
        if (total > cap) {
          return r - 1;
        }
      }
      return radius;
    }
  }  // namespace

  std::vector<CheckResult> run_checks(RepPtr rep, CheckOptions const& opt) {
    std::vector<CheckResult> out;
    auto const&              o    = *rep->oracle;
    auto const               gens = static_cast<Symbol>(rep->gens.size());

    {
      Recorder r("validate");
      r.guard("validate", [&] {
        rep->validate();
        r.expect(true, "");
      });
      out.push_back(r.r);
    }
    {
      Recorder r("identity");
      r.guard("identity", [&] {
        r.expect(rep->language.check(rep->identity) != Membership::Out, "u0 is not in L");
        r.expect(rep->decode(rep->identity) == o.identity(), "u0 does not decode to e");
      });
      out.push_back(r.r);
    }

    // Exhaustive words, carrying the normal form and oracle value along.
    int const radius = feasible_radius(gens, opt.radius, opt.word_cap);
    Recorder  agree("oracle agreement, all words of length <= " + std::to_string(radius));
    Recorder  closed("multiplier outputs stay in L");
    Recorder  bounded("bounded difference");
    Recorder  inverse("f_s' undoes f_s");
    std::vector<Word> forms;
    {
      Word v(rep->gens.symbols);
      std::function<void(Word const&, OracleElement const&)> walk
          = [&](Word const& w, OracleElement const& g) {
              agree.expect(rep->decode(w) == g, "'" + v.str() + "' -> '" + w.str() + "'");
              forms.push_back(w);
              if (static_cast<int>(v.size()) == radius) {
                return;
              }
              for (Symbol s = 0; s < gens; ++s) {
                std::optional<Word> next;
                agree.guard("'" + v.str() + "' times " + rep->gens.symbols->name(s), [&] {
                  next = multiply_by_generator(*rep, w, s, false).first;
                });
                if (!next) {
                  continue;
                }
                v.push_back(s);
                walk(*next, o.act(g, s));
                v.letters().pop_back();
              }
            };
      walk(rep->identity, o.identity());
    }

    for (auto const& w : forms) {
      for (Symbol s = 0; s < gens; ++s) {
        auto const& f = rep->multipliers[s];
        closed.guard("'" + w.str() + "'", [&] {
          auto x = f.apply(w).word;
          closed.expect(rep->language.check(x) != Membership::Out,
                        "'" + w.str() + "' times " + rep->gens.symbols->name(s) + " left L");
          auto diff = x.size() > w.size() ? x.size() - w.size() : w.size() - x.size();
          std::optional<std::uint64_t> k = f.k();
          if (f.backend() == MultiplierFn::Backend::Transducer) {
            k = static_cast<std::uint64_t>(f.transducer_ptr()->state_count());
          }
          if (k) {
            bounded.expect(diff <= *k, "'" + w.str() + "' times " + rep->gens.symbols->name(s)
                                           + " changed length by " + std::to_string(diff));
          }
          auto back = rep->multipliers[rep->gens.inverse[s]].apply(x).word;
          inverse.expect(back == w, "'" + w.str() + "' via " + rep->gens.symbols->name(s));
        });
      }
    }
    out.push_back(agree.r);
    out.push_back(closed.r);
    out.push_back(bounded.r);
    out.push_back(inverse.r);

    Recorder     random("oracle agreement, " + std::to_string(opt.samples) + " random words of length "
                        + std::to_string(opt.sample_length));
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<Symbol> pick(0, gens - 1);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      Word v(rep->gens.symbols);
      for (int j = 0; j < opt.sample_length; ++j) {
        v.push_back(pick(rng));
      }
      random.guard("'" + v.str() + "'", [&] {
        auto nf = normal_form(*rep, v).word;
        random.expect(rep->decode(nf) == evaluate_word(o, v), "'" + v.str() + "'");
      });
    }
    out.push_back(random.r);
    return out;
  }

}  // namespace cayley
