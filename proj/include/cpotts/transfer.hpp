#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "cpotts/rmatrix.hpp"
#include "cpotts/sector.hpp"

namespace cpotts {

// Row-to-row transfer matrix of the four-state vertex model on a periodic
// strip of L sites: trace over one auxiliary space of the ordered product of
// local R = P Rcheck factors, closed by the diagonal twist operator
// tau_a = exp(-2i(phi1 s1(a) + phi2 s2(a))) on the auxiliary line.  Twists
// are read from basis.sector.  Rows/columns are output/input configurations
// indexed by the sector basis; charge conservation keeps the image in-sector.
// Throws when L exceeds dense_cap or the dense buffer would be oversized.
Eigen::MatrixXcd build_transfer(const SectorBasis& basis, Cplx lambda,
                                double gamma, int dense_cap = 10);

struct TransferPair {
    Eigen::MatrixXcd value;  // T(lambda)
    Eigen::MatrixXcd deriv;  // dT/dlambda at the same lambda
};
// Same contraction carrying (value, derivative) pairs through the product.
TransferPair build_transfer_with_deriv(const SectorBasis& basis, Cplx lambda,
                                       double gamma, int dense_cap = 10);

// T(0) = a(0)^L G with G a one-site translation carrying the twist phase of
// the digit that wraps around the seam: G maps configuration s to the
// right-rotated configuration with amplitude tau(last digit of s).  Built by
// the lambda = 0 contraction, where exactly one path survives per column.
struct ShiftOp {
    int dim = 0;
    std::vector<int> dest;    // row index of the single entry per column
    std::vector<Cplx> phase;  // that entry divided by a(0)^L (unimodular)
};
ShiftOp translation_op(const SectorBasis& basis, double gamma);

// One eigenvalue mu of G together with an orthonormal family of symmetrized
// eigenvectors, each supported on a single translation orbit (stored as
// sparse columns of basis-index/coefficient pairs).  Any operator commuting
// with G is block-diagonal across these families.
struct MomentumBlock {
    Cplx mu;
    std::vector<std::vector<std::pair<int, Cplx>>> columns;
    int dim() const { return int(columns.size()); }
};
std::vector<MomentumBlock> momentum_blocks(const ShiftOp& g);

// Q^dagger op Q for one block's column family Q.
Eigen::MatrixXcd restrict_to_block(const Eigen::MatrixXcd& op,
                                   const MomentumBlock& b);

// Spin-chain Hamiltonian from the logarithmic derivative of the transfer
// matrix at its regular point,
//   H = (i/2) (T'(0) T(0)^{-1} - L a'(0)/a(0)),
// computed analytically (T(0)^{-1} is the inverse twisted shift).  The i
// maps Bethe levels to the real kernel sum_i sin(g)/(cosh 2l_i - cos g);
// the 1/2 and the sign are fixed against the Fermi velocity pi/(pi-4g):
// twisted ground states extrapolate to central charge +8/5 at k = 4.
// Away from the Bethe-representable levels the spectrum is complex (in
// conjugate pairs): the periodic chain is not hermitizable as a whole.
Eigen::MatrixXcd build_hamiltonian(const SectorBasis& basis, double gamma,
                                   int dense_cap = 10);

// Joint sector spectrum: transfer eigenvalues at the given lambda paired
// with energies and momentum phases, computed blockwise so degenerate
// energies never mix momentum families.  Sorted by |Lambda| descending with
// (re, im) lexicographic tie-break; count < 0 keeps the full spectrum.
struct SpectrumRecord {
    SectorLabel sector;
    std::vector<Cplx> eigenvalues;
    std::vector<double> energies;
    std::vector<double> momenta;  // arg of the translation eigenvalue
};
SpectrumRecord sector_spectrum(const SectorBasis& basis, Cplx lambda,
                               double gamma, int count = -1,
                               int dense_cap = 10);

// Transfer eigenvalues only (no Hamiltonian), blockwise, sorted as above.
std::vector<Cplx> transfer_spectrum(const SectorBasis& basis, Cplx lambda,
                                    double gamma, int dense_cap = 10);

}  // namespace cpotts
