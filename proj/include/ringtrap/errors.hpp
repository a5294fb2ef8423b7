// Error types shared across the library.  The CLI maps them to exit codes:
// config_error -> 2, domain_error -> 3, io_error -> 4.
#pragma once

#include <stdexcept>
#include <string>

namespace ringtrap {

// A physical precondition or model-domain violation (negative wavelength,
// blue-detuned trap light, zero Raman detuning, ...).
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration parsing or validation failure.  Messages carry the
// dotted field path of the offending key where known.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure while reading inputs or emitting artifacts.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ringtrap
