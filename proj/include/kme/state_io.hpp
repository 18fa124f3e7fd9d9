#pragma once

// "kme-state v1" text files.
//
//   # kme-state v1
//   kind: vector | matrix
//   dims: d1 d2 ... dn
//   <flat-index> <re> <im>              (vector entries)
//   <row> <col> <re> <im>               (matrix entries, row <= col only)
//
// Flat indices follow the party-0-most-significant convention. Unlisted
// entries are zero; the lower triangle of a matrix is the conjugate of the
// upper one. Blank lines and '#' comments are ignored.

#include <iosfwd>
#include <string>
#include <variant>

#include "kme/qnum.hpp"

namespace kme {

using AnyState = std::variant<StateVector, DensityMatrix>;

AnyState read_state(std::istream& in);
AnyState read_state_file(const std::string& path);

void write_state(std::ostream& out, const StateVector& psi);
void write_state(std::ostream& out, const DensityMatrix& rho);
void write_state_file(const std::string& path, const AnyState& state);

/// Pure states become |psi><psi|.
DensityMatrix as_density_matrix(const AnyState& state);

}  // namespace kme
