#pragma once

#include <stdexcept>
#include <string>

namespace gjext {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed textual input ("p/q" strings, documents).
struct ParseError : Error {
  using Error::Error;
};

/// A constructor or operation precondition is violated (bad b, bad delta,
/// ball overlap, simplex disjointness failure, dimension mismatch, ...).
struct ConstructionError : Error {
  using Error::Error;
};

/// An enumeration (grid sweep, pair sweep) would exceed its configured budget.
struct BudgetError : Error {
  using Error::Error;
};

/// Command-line / configuration misuse.
struct UsageError : Error {
  using Error::Error;
};

/// A registration-time certificate failed; message carries the violated
/// condition and a witness.
struct CertificateError : Error {
  using Error::Error;
};

}  // namespace gjext
