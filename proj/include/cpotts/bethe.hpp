#pragma once
// Nested Bethe-equation solver for the two-root-family chain: seed catalog,
// damped Newton with branch-integer bookkeeping, energies and translation
// phases from converged root sets, plus twist/size continuation drivers.
//
// Conventions (matching the transfer module's normalization):
//   lambda-equation i:  e^{2 i phi1} [sinh(l_i - ig/2)/sinh(l_i + ig/2)]^L
//       = prod_{j != i} sinh(l_ij - ig)/sinh(l_ij + ig)
//       * prod_k sinh(2(l_i - m_k) + ig)/sinh(2(l_i - m_k) - ig)
//   mu-equation k:      e^{2 i (phi1 - phi2)}
//       prod_j sinh(2(m_k - l_j) - ig)/sinh(2(m_k - l_j) + ig)
//       = prod_{l != k} sinh(2(m_k - m_l) - 2ig)/sinh(2(m_k - m_l) + 2ig)
// Energies: E = sign * sum_i sin(g)/(cosh 2l_i - cos g), sign=+1 in the
// antiferromagnetic regime.  Translation eigenvalue at the regular point:
// phase = e^{i(phi1+phi2)} prod_i sinh(ig/2 - l_i)/sinh(-ig/2 - l_i).
// lambda-roots live mod i*pi (canonical Im in (-pi/2, pi/2]); mu-roots are
// additionally mod i*pi/2 (canonical Im in (-pi/4, pi/4]).

#include <complex>
#include <string>
#include <vector>

namespace cpotts {

using Cplx = std::complex<double>;

// (n1, n2): nonnegative magnetisations; j: excitation index (number of
// 2-strings converted to pi/2-axis anticonjugate pairs); primed: the
// companion state reached by a different branch-integer assignment, seeded
// from the large-twist root pattern (real root / gamma/2-strings).
struct StateLabel {
    int n1 = 0;
    int n2 = 0;
    int j = 0;
    bool primed = false;
    std::string name() const;
};

// Root counts fixed by the magnetisations.
int root_count_m1(int L, const StateLabel& s);
int root_count_m2(int L, const StateLabel& s);

enum class RootTag {
    TwoString,      // member of a conjugate pair near Im = +-(pi/4 - g/2)
    TwoStarString,  // member of a conjugate pair near Im = +-g/2
    Antistring,     // pi/2-axis root with an opposite-real-part partner
    PiHalfAxis,     // other root on the Im = pi/2 axis
    RealAxis,       // real lambda-root
    MuAxis,         // mu-root on the Im = pi/4 axis
    MuReal,         // real mu-root
    Generic
};

struct RootConfiguration {
    int L = 0;
    double gamma = 0;
    double phi1 = 0, phi2 = 0;
    StateLabel state;
    std::vector<Cplx> lambda;  // m1 roots
    std::vector<Cplx> mu;      // m2 roots
    std::vector<int> branch;   // Bethe integers, lambda equations then mu
    std::vector<RootTag> tags; // aligned with lambda then mu
    double residual = -1;      // max |log-form residual| after solving

    int m1() const { return int(lambda.size()); }
    int m2() const { return int(mu.size()); }
};

// Constructive seed for a catalog state; throws invalid_argument when the
// label is not realizable at this size.  Branch integers are set by rounding
// the seed's log-form residuals.
RootConfiguration seed_state(int L, const StateLabel& label, double gamma,
                             double phi1 = 0, double phi2 = 0);

// Log-form residuals F_i - 2 pi i I_i for all m1+m2 equations at the
// configuration's current roots and branch integers.  Throws runtime_error
// on pole proximity (|sinh| < 1e-12 in any factor).
std::vector<Cplx> bae_residual(const RootConfiguration& cfg);

struct SolveOptions {
    double tol = 1e-12;   // max |residual| accepted as converged
    int max_iter = 200;
    int max_rebase = 8;   // branch re-basing attempts on stall
    bool symmetric = false;  // enforce conjugation symmetry (zero twist)
};

// Damped Newton polish of a seed; preserves the branch unless a stall forces
// re-basing.  Throws runtime_error on divergence, singular Jacobian, or
// root collision.  In symmetric mode roots are paired/pinned by conjugation
// (conjugate pairs keep one complex unknown; axis roots keep one real one).
RootConfiguration newton_solve(const RootConfiguration& seed,
                               const SolveOptions& opts = {});

// Seed + jittered retries (deterministic), symmetric mode chosen
// automatically at zero twist for unprimed states.
RootConfiguration solve_state(int L, const StateLabel& label, double gamma,
                              double phi1 = 0, double phi2 = 0,
                              const SolveOptions& opts = {});

// E = sign * sum_i sin(g)/(cosh 2 lambda_i - cos g); the imaginary part
// (vanishing for conjugation-symmetric sets) is dropped.
double energy_from_roots(const RootConfiguration& cfg, int sign = +1);
Cplx energy_sum_from_roots(const RootConfiguration& cfg);

// Unit-modulus translation eigenvalue at the regular point; compare with the
// momentum phase attached to transfer-matrix levels.
Cplx translation_phase_from_roots(const RootConfiguration& cfg);

struct ContinuationResult {
    std::vector<RootConfiguration> configs;
    bool blocked = false;  // path abandoned before the endpoint
};

// Adaptive continuation in the twist pair from the start configuration's
// (phi1, phi2) to the target, re-solving at each step.
ContinuationResult continue_twist(const RootConfiguration& start,
                                  double phi1_to, double phi2_to,
                                  const SolveOptions& opts = {});

// Size ladder L -> L+2 -> ... -> L_to: inserts a fresh 2-string and mu-root
// at the Fermi-sea edge each step and re-solves.
ContinuationResult l_ladder(const RootConfiguration& start, int L_to,
                            const SolveOptions& opts = {});

// JSON archive of one configuration (single-record schema used by the CLI).
std::string root_archive_json(const RootConfiguration& cfg);
RootConfiguration root_archive_from_json(const std::string& text);

}  // namespace cpotts
