#pragma once

#include <stdexcept>
#include <string>

namespace ucc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point does not lie on the tree / set it was claimed to lie on.
struct InvalidPointError : Error {
  using Error::Error;
};

// Malformed argument (empty set, non-subtree, Z not inside Y, ...).
struct ArgumentError : Error {
  using Error::Error;
};

// Points or ends referenced beyond the requested / loaded tower level.
struct LevelError : Error {
  using Error::Error;
};

// A word evaluation left the loaded tower prefix.
struct EscapeError : Error {
  using Error::Error;
};

// Scenario / model data is inconsistent (missing end, bad declaration, ...).
struct ModelError : Error {
  using Error::Error;
};

// An operation's stated precondition does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace ucc
