#pragma once

#include <stdexcept>
#include <string>

namespace kme {

/// Malformed or out-of-range input: bad dimensions, invalid partitions,
/// non-orthogonal probes, unparsable files. CLI exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a value that violates its own contract, e.g. a
/// clearly negative product of diagonal expectations. CLI exit code 3.
class NumericIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kme
