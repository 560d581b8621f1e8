#ifndef CAYLEY_ERRORS_HPP_
#define CAYLEY_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cayley {

  // Base of every error the library throws on purpose.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Caller misuse: mixed alphabets, malformed text, unknown names.
  class UsageError : public Error {
   public:
    using Error::Error;
  };

  // Position-annotated failure while parsing textual input.
  class ParseError : public UsageError {
   public:
    ParseError(std::string const& msg, std::size_t pos)
        : UsageError(msg + " (at position " + std::to_string(pos) + ")"),
          _pos(pos) {}
    std::size_t position() const noexcept {
      return _pos;
    }

   private:
    std::size_t _pos;
  };

  // Input outside the domain of a partial function (transducer, machine).
  class DomainError : public Error {
   public:
    using Error::Error;
  };

  // A transducer produced two different outputs for one input.
  class FunctionalityError : public Error {
   public:
    using Error::Error;
  };

  // A machine ran past its declared time budget.
  class BudgetExceeded : public Error {
   public:
    using Error::Error;
  };

  // A position-faithful machine tried to touch or cross the left marker.
  class FaithfulnessError : public Error {
   public:
    using Error::Error;
  };

  // A word handed to a multiplier is not a normal form.
  class MembershipError : public Error {
   public:
    using Error::Error;
  };

  // Operation is not available for this representation.
  class UnsupportedError : public Error {
   public:
    using Error::Error;
  };

  // A breadth-first search or enumeration hit its configured cap.
  class CapExceeded : public Error {
   public:
    using Error::Error;
  };

}  // namespace cayley

#endif  // CAYLEY_ERRORS_HPP_
