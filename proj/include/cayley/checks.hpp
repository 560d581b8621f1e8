#ifndef CAYLEY_CHECKS_HPP_
#define CAYLEY_CHECKS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cayley/representation.hpp"

namespace cayley {

  struct CheckOptions {
    int           radius        = 5;     // exhaustive generator words up to this length
    std::size_t   word_cap      = 200'000;
    std::size_t   samples       = 200;
    int           sample_length = 24;
    std::uint64_t seed          = 1;
  };

  struct CheckResult {
    enum class Outcome { Pass, Disagreement, Budget };
    std::string   name;
    Outcome       outcome = Outcome::Pass;
    std::size_t   checked = 0;
    std::string   detail;  // first counterexample

    bool passed() const noexcept {
      return outcome == Outcome::Pass;
    }
  };

  // Invariant suite of one representation against its oracle: identity,
  // exhaustive and random agreement, closure of L under the multipliers,
  // bounded difference, and f_{s'} f_s = id.
  std::vector<CheckResult> run_checks(RepPtr rep, CheckOptions const& opt = {});

}  // namespace cayley

#endif  // CAYLEY_CHECKS_HPP_
