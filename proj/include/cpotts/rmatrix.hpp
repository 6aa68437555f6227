#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cpotts {

using Cplx = std::complex<double>;

// Boltzmann weights of the 4-state vertex check-R matrix in the
// multiplicative normalization: functions of x = e^{2 lambda} with
// q = e^{i gamma}, zeta = -q^4.
struct VertexWeights {
    Cplx a, b, c, cbar;
    Cplx d[4][4];  // d[alpha-1][beta-1], conjugate-pair block
};

VertexWeights vertex_weights(Cplx lambda, double gamma);
// d/dlambda of every weight (analytic, used by the Hamiltonian limit).
VertexWeights vertex_weights_dlambda(Cplx lambda, double gamma);

// Basis bookkeeping.  Single-site states are ordered (-2, -1, 1, 2); index
// i in 0..3 carries colour spins (+-1/2, +-1/2) with i = 2*(s1+1/2)+(s2+1/2),
// charge t = s1+s2, and conjugation i -> 3-i.
double spin_of(int idx, int colour);  // +-0.5
int charge_of(int idx);               // -1, 0, 0, 1
int conjugate_of(int idx);            // 3 - idx

// 16x16 check-R on the ordered pair basis; row index 4*out_a + out_b,
// column index 4*in_a + in_b.
Eigen::MatrixXcd assemble_rcheck(const VertexWeights& w);
Eigen::MatrixXcd vertex_rcheck(Cplx lambda, double gamma);
Eigen::MatrixXcd vertex_rcheck_dlambda(Cplx lambda, double gamma);

// a'(0)/a(0) = 2 + i(cot(gamma) - tan(2 gamma)): the per-site constant
// subtracted when forming the Hamiltonian from the log-derivative.
Cplx rcheck_log_deriv_const(double gamma);

// Two-site Temperley-Lieb generator of one colour in the spin basis
// (16x16): matrix elements delta_{a+b,0} delta_{c+d,0} q^{c-b} on its own
// colour, identity on the other.
Eigen::MatrixXcd tl_e(int colour, double gamma);

// BWM partner generators on the pair space; bwm_x equals e1 + e2 as an
// operator identity (asserted in tests, exploited by the loop form).
Eigen::MatrixXcd bwm_b(double gamma);
Eigen::MatrixXcd bwm_x(double gamma);

// Apply a 16x16 two-site operator at sites (site, site+1 mod L) of a
// 4^L-dimensional chain vector.  Site 0 is the leftmost tensor factor.
Eigen::VectorXcd apply_two_site_op(const Eigen::MatrixXcd& op, int site, int L,
                                   const Eigen::VectorXcd& v);

// Max residual of the TL relations (e^2 = n e, e_i e_{i+-1} e_i = e_i,
// distant and cross-colour commutation) probed on a seeded random vector.
double tl_relations_residual(int L, int colour, double gamma, unsigned seed);

// Coefficients of the three diagram classes of the loop check-R in the
// additive spectral parameter u: identity, single-colour contraction pair,
// double contraction.
struct LoopWeights {
    double w_i = 1.0;
    double w_x = 0.0;
    double w_e = 0.0;
};
// Throws on the normalization poles sin(pi(1+u)/(2+k)) = 0 and
// cos(pi(2+u)/(2+k)) = 0.
LoopWeights loop_weights(double u, double k);
double isotropic_u(double k);  // u* = k/4 - 1/2, where (w_i,w_x,w_e)=(1,lc,1)

// Loop check-R on the spin pair space: w_i Id + w_x (e1 + e2) + w_e e1 e2.
Eigen::MatrixXcd loop_rcheck_tl(double u, double k);

// Diagonal gauge factors relating the vertex and loop forms; the pair
// similarity uses U on the first leg and V on the second.
Eigen::Matrix4cd gauge_u();  // diag(1, i, i, 1)
Eigen::Matrix4cd gauge_v();  // diag(i, 1, 1, i)

enum class SiteParity { even, odd };
// One-leg gauge: P op P^{-1} with P = U x Id (even) or Id x V (odd).
Eigen::MatrixXcd gauge_conjugate(const Eigen::MatrixXcd& pair_op,
                                 SiteParity parity);
// Both legs: (U x V) op (U x V)^{-1}.
Eigen::MatrixXcd gauge_full(const Eigen::MatrixXcd& pair_op);

// Relative Yang-Baxter residual in difference form on C^64:
// R12(l-m) R23(l) R12(m) vs R23(m) R12(l) R23(l-m), scaled by the larger
// side's max entry.
double ybe_residual(Cplx lambda, Cplx mu, double gamma);

// Max |Rcheck(0) - a(0) Id| / |a(0)|.
double regularity_residual(double gamma);

// Entrywise distance between vertex_rcheck(-i gamma u)/a and the
// gauge-conjugated loop form at the same u (the multiplicative/additive
// spectral map lambda = -i gamma u).
double gauge_equivalence_residual(double u, double k);

}  // namespace cpotts
