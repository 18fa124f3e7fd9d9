#pragma once

// Positivity checks by full diagonalisation. Kept out of every bound and
// concurrence path; used by tests and by `kme sweep --check-psd`.

#include "kme/qnum.hpp"

namespace kme {

inline constexpr double kPsdTol = 1e-10;

double min_eigenvalue(const DensityMatrix& rho);
/// min_eigenvalue(rho) >= -tol
bool is_psd(const DensityMatrix& rho, double tol = kPsdTol);

}  // namespace kme
