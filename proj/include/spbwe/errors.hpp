#pragma once

#include <stdexcept>
#include <string>

namespace spbwe {

// Base of the toolkit's error hierarchy. The CLI maps anything derived
// from Error to exit code 1; usage problems are handled by the parser
// and exit with 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
// Malformed input; message carries file:line where known.
struct ParseError : Error { using Error::Error; };
// Well-formed input that is inconsistent (index out of range, id gaps, ...).
struct ValidationError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };
struct RankError : Error { using Error::Error; };
struct StaleInputError : Error { using Error::Error; };

}  // namespace spbwe
