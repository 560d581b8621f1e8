#include "cayley/pftm.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cayley/errors.hpp"

namespace cayley {

  namespace {
    constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

    std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
      return a > kInf - b ? kInf : a + b;
    }
    std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
      if (a == 0 || b == 0) {
        return 0;
      }
      return a > kInf / b ? kInf : a * b;
    }

    char const* move_name(Move m) {
      switch (m) {
        case Move::L: return "L";
        case Move::R: return "R";
        case Move::S: return "S";
      }
      return "?";
    }

    Move move_from(std::string const& s) {
      if (s == "L") {
        return Move::L;
      }
      if (s == "R") {
        return Move::R;
      }
      if (s == "S") {
        return Move::S;
      }
      throw UsageError("unknown head move '" + s + "'");
    }
  }  // namespace

  TimeBudget TimeBudget::pf_linear(std::uint64_t c1, std::uint64_t c0) {
    TimeBudget b;
    b._kind   = Kind::PfLinear;
    b._coeffs = {c0, c1};
    return b;
  }

  TimeBudget TimeBudget::quadratic(std::uint64_t c2) {
    TimeBudget b;
    b._kind   = Kind::Quadratic;
    b._coeffs = {0, 0, c2};
    return b;
  }

  TimeBudget TimeBudget::polynomial(std::vector<std::uint64_t> coeffs) {
    TimeBudget b;
    b._kind   = Kind::Polynomial;
    b._coeffs = std::move(coeffs);
    return b;
  }

  TimeBudget TimeBudget::composed(std::vector<TimeBudget> parts,
                                  std::optional<std::uint64_t> growth) {
    TimeBudget b;
    b._kind   = Kind::Composed;
    b._parts  = std::move(parts);
    b._growth = growth;
    return b;
  }

  TimeBudget TimeBudget::overhead(TimeBudget inner, std::uint64_t a, std::uint64_t b,
                                  std::uint64_t c) {
    TimeBudget o;
    o._kind   = Kind::Overhead;
    o._parts  = {std::move(inner)};
    o._coeffs = {c, b, a};
    return o;
  }

  TimeBudget TimeBudget::unlimited() {
    return polynomial({kInf});
  }

  std::uint64_t TimeBudget::operator()(std::uint64_t n) const {
    if (_kind == Kind::Composed) {
      std::uint64_t total = 0, len = n;
      for (auto const& p : _parts) {
        auto steps = p(len);
        total      = sat_add(total, steps);
        len        = sat_add(len, _growth ? *_growth : steps);
      }
      return total;
    }
    if (_kind == Kind::Overhead) {
      auto in = _parts[0](n);
      return sat_add(sat_add(in, sat_mul(_coeffs[2], sat_mul(n, in))),
                     sat_add(sat_mul(_coeffs[1], n), _coeffs[0]));
    }
    std::uint64_t total = 0, power = 1;
    for (std::size_t i = 0; i < _coeffs.size(); ++i) {
      total = sat_add(total, sat_mul(_coeffs[i], power));
      power = sat_mul(power, n);
    }
    return total;
  }

  std::optional<std::pair<std::uint64_t, std::uint64_t>> TimeBudget::linear_constants() const {
    if (_kind == Kind::PfLinear) {
      return std::pair{_coeffs[1], _coeffs[0]};
    }
    if (_kind == Kind::Overhead) {
      auto lc = _parts[0].linear_constants();
      if (!lc || _coeffs[2] != 0) {
        return std::nullopt;
      }
      return std::pair{sat_add(lc->first, _coeffs[1]), sat_add(lc->second, _coeffs[0])};
    }
    if (_kind != Kind::Composed || !_growth) {
      return std::nullopt;
    }
    // sum of c1_i (n + i g) + c0_i
    std::uint64_t c1 = 0, c0 = 0;
    for (std::size_t i = 0; i < _parts.size(); ++i) {
      auto lc = _parts[i].linear_constants();
      if (!lc) {
        return std::nullopt;
      }
      c1 = sat_add(c1, lc->first);
      c0 = sat_add(c0, sat_add(lc->second, sat_mul(lc->first, sat_mul(i, *_growth))));
    }
    return std::pair{c1, c0};
  }

  std::string TimeBudget::describe() const {
    std::ostringstream os;
    switch (_kind) {
      case Kind::PfLinear: os << "pf-linear(" << _coeffs[1] << "n+" << _coeffs[0] << ")"; break;
      case Kind::Quadratic: os << "quadratic(" << _coeffs[2] << "n^2)"; break;
      case Kind::Polynomial: {
        if (_coeffs.size() == 1 && _coeffs[0] == kInf) {
          return "unlimited";
        }
        os << "polynomial(";
        for (std::size_t i = _coeffs.size(); i-- > 0;) {
          os << _coeffs[i];
          if (i > 0) {
            os << "n^" << i << "+";
          }
        }
        os << ")";
        break;
      }
      case Kind::Composed: {
        if (auto lc = linear_constants()) {
          os << "pf-linear(" << lc->first << "n+" << lc->second << ")";
          break;
        }
        os << "composed(";
        for (std::size_t i = 0; i < _parts.size(); ++i) {
          os << (i ? ";" : "") << _parts[i].describe();
        }
        os << ")";
        break;
      }
      case Kind::Overhead: {
        if (auto lc = linear_constants()) {
          os << "pf-linear(" << lc->first << "n+" << lc->second << ")";
          break;
        }
        os << "overhead(" << _parts[0].describe() << ";" << _coeffs[2] << "n*inner+"
           << _coeffs[1] << "n+" << _coeffs[0] << ")";
        break;
      }
    }
    return os.str();
  }

  PfProgram::PfProgram(std::string name, AlphabetPtr alphabet, std::vector<std::string> work,
                       std::vector<std::string> states, int start, int accept,
                       std::vector<Rule> rules)
      : _name(std::move(name)),
        _alphabet(std::move(alphabet)),
        _work(std::move(work)),
        _states(std::move(states)),
        _start(start),
        _accept(accept),
        _rules(std::move(rules)) {
    int n = static_cast<int>(_states.size());
    if (_start < 0 || _start >= n || _accept < 0 || _accept >= n) {
      throw UsageError("program start/accept state out of range");
    }
    for (auto const& w : _work) {
      if (_alphabet->find(w) || w == kBoxPlusToken || w == kBoxDotToken) {
        throw UsageError("work symbol '" + w + "' collides with the tape alphabet");
      }
    }
    std::size_t width = tape_symbol_count();
    _table.assign(static_cast<std::size_t>(n) * width, -1);
    for (std::size_t i = 0; i < _rules.size(); ++i) {
      auto const& r = _rules[i];
      if (r.state < 0 || r.state >= n || r.next < 0 || r.next >= n || r.read >= width
          || r.write >= width) {
        throw UsageError("program rule out of range");
      }
      auto& slot = _table[static_cast<std::size_t>(r.state) * width + r.read];
      if (slot >= 0) {
        throw UsageError("program is not deterministic at " + rule_str(r));
      }
      slot = static_cast<int>(i);
    }
  }

  std::string PfProgram::symbol_name(TapeSymbol t) const {
    if (t == kBoxPlus) {
      return std::string(kBoxPlusToken);
    }
    if (t == kBoxDot) {
      return std::string(kBoxDotToken);
    }
    if (t < 2 + _alphabet->size()) {
      return _alphabet->name(static_cast<Symbol>(t - 2));
    }
    return _work.at(t - 2 - _alphabet->size());
  }

  TapeSymbol PfProgram::symbol_code(std::string const& name) const {
    if (name == kBoxPlusToken) {
      return kBoxPlus;
    }
    if (name == kBoxDotToken) {
      return kBoxDot;
    }
    if (auto s = _alphabet->find(name)) {
      return user(*s);
    }
    auto it = std::find(_work.begin(), _work.end(), name);
    if (it == _work.end()) {
      throw UsageError("unknown tape symbol '" + name + "'");
    }
    return static_cast<TapeSymbol>(2 + _alphabet->size() + (it - _work.begin()));
  }

  std::string PfProgram::rule_str(Rule const& r) const {
    return "(" + _states.at(static_cast<std::size_t>(r.state)) + ", " + symbol_name(r.read)
           + ") -> (" + symbol_name(r.write) + ", " + move_name(r.move) + ", "
           + _states.at(static_cast<std::size_t>(r.next)) + ")";
  }

  PfProgram::Rule const* PfProgram::find(int state, TapeSymbol read) const {
    int i = _table[static_cast<std::size_t>(state) * tape_symbol_count() + read];
    return i < 0 ? nullptr : &_rules[static_cast<std::size_t>(i)];
  }

  PfBuilder::PfBuilder(std::string name, AlphabetPtr alphabet, std::vector<std::string> work)
      : _name(std::move(name)), _alphabet(std::move(alphabet)), _work(std::move(work)) {}

  int PfBuilder::state(std::string const& name) {
    auto [it, fresh] = _ids.try_emplace(name, static_cast<int>(_states.size()));
    if (fresh) {
      _states.push_back(name);
    }
    return it->second;
  }

  PfBuilder& PfBuilder::rule(std::string const& st, std::string const& read,
                             std::string const& write, Move move, std::string const& next) {
    int a = state(st);
    int b = state(next);
    _rules.emplace_back(a, read, write, move, b);
    return *this;
  }

  PfProgram PfBuilder::build(std::string const& start, std::string const& accept) const {
    auto self = *this;
    int  s    = self.state(start);
    int  a    = self.state(accept);
    // symbol names resolve against a rule-free program first
    PfProgram probe(_name, _alphabet, _work, self._states, s, a, {});
    std::vector<PfProgram::Rule> rules;
    for (auto const& [st, read, write, move, next] : self._rules) {
      rules.push_back({st, probe.symbol_code(read), probe.symbol_code(write), move, next});
    }
    return PfProgram(_name, _alphabet, _work, self._states, s, a, std::move(rules));
  }

  PfVerdict check_position_faithful(PfProgram const& prog) {
    PfVerdict v;
    for (auto const& r : prog.rules()) {
      std::string why;
      if (r.write == kBoxPlus && r.read != kBoxPlus) {
        why = "writes BOX+ away from the left end";
      } else if (r.read == kBoxPlus && r.write != kBoxPlus) {
        why = "overwrites BOX+";
      } else if (r.read == kBoxPlus && r.move == Move::L) {
        why = "moves left of BOX+";
      } else if (r.state == prog.accept()) {
        why = "leaves the accept state";
      }
      if (!why.empty()) {
        v.faithful = false;
        v.offending.push_back(prog.rule_str(r) + ": " + why);
      }
    }
    return v;
  }

  PfRun run(PfProgram const& prog, Word const& input, TimeBudget const& budget) {
    if (!same_alphabet(input.alphabet(), prog.alphabet())) {
      throw UsageError("run: input over a different alphabet");
    }
    std::vector<TapeSymbol> tape;
    tape.reserve(input.size() + 16);
    tape.push_back(kBoxPlus);
    for (auto s : input) {
      tape.push_back(prog.user(s));
    }
    std::uint64_t const limit = budget(input.size());
    std::size_t         head  = 0;
    int                 state = prog.start();
    std::uint64_t       steps = 0;
    while (state != prog.accept()) {
      if (head >= tape.size()) {
        tape.resize(head + 1, kBoxDot);
      }
      auto const* r = prog.find(state, tape[head]);
      if (r == nullptr) {
        throw DomainError(prog.name() + ": machine rejects '" + input.str() + "'");
      }
      if (steps == limit) {
        throw BudgetExceeded(prog.name() + ": exceeded " + std::to_string(limit) + " steps ("
                             + budget.describe() + ") on input of length "
                             + std::to_string(input.size()));
      }
      ++steps;
      if (head == 0 && r->write != kBoxPlus) {
        throw FaithfulnessError(prog.name() + ": overwrote BOX+ at step " + std::to_string(steps));
      }
      if (head != 0 && r->write == kBoxPlus) {
        throw FaithfulnessError(prog.name() + ": wrote BOX+ at cell " + std::to_string(head)
                                + " at step " + std::to_string(steps));
      }
      tape[head] = r->write;
      if (r->move == Move::L) {
        if (head == 0) {
          throw FaithfulnessError(prog.name() + ": moved left of BOX+ at step "
                                  + std::to_string(steps));
        }
        --head;
      } else if (r->move == Move::R) {
        ++head;
      }
      state = r->next;
#ifndef NDEBUG
      if (tape[0] != kBoxPlus) {
        throw FaithfulnessError(prog.name() + ": cell 0 lost BOX+");
      }
#endif
    }
    Word out(prog.alphabet());
    for (std::size_t i = 1; i < tape.size() && tape[i] != kBoxDot; ++i) {
      if (tape[i] < 2 || tape[i] >= 2 + prog.alphabet()->size()) {
        throw DomainError(prog.name() + ": output contains a work symbol");
      }
      out.letters().push_back(static_cast<Symbol>(tape[i] - 2));
    }
    return {std::move(out), steps};
  }

  std::string program_to_json(PfProgram const& prog) {
    nlohmann::json j;
    j["name"]     = prog.name();
    j["alphabet"] = prog.alphabet()->names();
    j["work"]     = prog.work_symbols();
    j["states"]   = prog.states();
    j["start"]    = prog.states()[static_cast<std::size_t>(prog.start())];
    j["accept"]   = prog.states()[static_cast<std::size_t>(prog.accept())];
    auto& ts      = j["transitions"] = nlohmann::json::array();
    for (auto const& r : prog.rules()) {
      ts.push_back({{"state", prog.states()[static_cast<std::size_t>(r.state)]},
                    {"read", prog.symbol_name(r.read)},
                    {"write", prog.symbol_name(r.write)},
                    {"move", move_name(r.move)},
                    {"next", prog.states()[static_cast<std::size_t>(r.next)]}});
    }
    return j.dump(2);
  }

  PfProgram program_from_json(std::string const& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(std::string("invalid program JSON: ") + e.what(), e.byte);
    }
    try {
      auto      alphabet = Alphabet::make(j.at("alphabet").get<std::vector<std::string>>());
      PfBuilder b(j.value("name", std::string("program")), alphabet,
                  j.value("work", std::vector<std::string>{}));
      for (auto const& t : j.at("transitions")) {
        b.rule(t.at("state").get<std::string>(), t.at("read").get<std::string>(),
               t.at("write").get<std::string>(), move_from(t.at("move").get<std::string>()),
               t.at("next").get<std::string>());
      }
      return b.build(j.at("start").get<std::string>(), j.at("accept").get<std::string>());
    } catch (nlohmann::json::exception const& e) {
      throw UsageError(std::string("malformed program JSON: ") + e.what());
    }
  }

}  // namespace cayley
