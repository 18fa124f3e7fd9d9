#include "kme/psd.hpp"

#include <Eigen/Eigenvalues>

namespace kme {

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.entries(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_psd(const DensityMatrix& rho, double tol) { return min_eigenvalue(rho) >= -tol; }

}  // namespace kme
