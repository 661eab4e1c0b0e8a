#pragma once

#include <stdexcept>
#include <string>

namespace adtree {

// Base for every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files (CSV, value maps, wiring).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Bad argument to an operation (r_min < 1, duplicate attributes, p outside (0,1)...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A query that does not fit the dataset schema. Never reported as a zero count.
class QueryError : public Error {
 public:
  using Error::Error;
};

// Serialized tree does not match the dataset it is loaded against.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Invalid synthetic generator configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A dense rendering or reference structure exceeds its configured cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A broken internal invariant, e.g. a negative cell after table subtraction.
// Signals a bug in the tree, not bad user input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace adtree
