#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace cpotts {

using Cplx = std::complex<double>;

// Eigenvalues of a dense complex matrix (LAPACK zgeev), unordered.
std::vector<Cplx> dense_eigenvalues(Eigen::MatrixXcd m);

// Eigenvalues plus right eigenvectors; vectors.col(i) pairs with values[i].
struct EigenSystem {
    std::vector<Cplx> values;
    Eigen::MatrixXcd vectors;
};
EigenSystem dense_eigensystem(Eigen::MatrixXcd m);

// Sort by |z| descending; exact (-|z|, -re, -im) lexicographic order keeps
// conjugate partners and repeated runs deterministic.
void sort_spectrum(std::vector<Cplx>& v);

// The `count` largest-|z| eigenvalues of m, sorted as above.
std::vector<Cplx> top_spectrum(const Eigen::MatrixXcd& m, int count);

}  // namespace cpotts
