#pragma once

#include <string>
#include <vector>

#include "cpotts/rational.hpp"

namespace cpotts {

// Label of a low-lying level: magnetisation pair (n1, n2), excitation index j,
// and the primed flag for the distinguished excited family that exists only
// at n2 = 0 (the loop-model ground state candidate in (l1, 0)-leg sectors).
struct StateLabel {
    int n1 = 0;
    int n2 = 0;
    int j = 0;
    bool primed = false;
};

// Throws std::invalid_argument unless n1,n2,j >= 0 and, when primed,
// n1 >= 1, n2 = 0, j = 0.
void validate(const StateLabel& label);

enum class Branch { continuum, discrete_state };

// Effective central charge of one level at given twist angles.  A
// continuum-branch value is an asymptote approached as (log L)^-2; a
// discrete-branch value carries plain power-law corrections only.
struct ContinuumPrediction {
    double c_eff = 0.0;
    Branch branch = Branch::continuum;
    double threshold = 0.0;           // twist sum at which the state detaches
    bool has_log_correction = true;   // true exactly on the continuum branch
};

// c = 3k^2/((k+1)(k+2)); checked internally against the equivalent
// twist-angle form 3 - 12*gamma/pi + 3*gamma/(pi-gamma) at gamma = pi/(k+2).
double central_charge(double k);

// Piecewise effective central charge of the level `label` at twists
// (phi1, phi2).  Even in each twist; branch switches where |phi1|+|phi2|
// crosses the threshold (n1+n2+2j+1)*gamma, or (n1-1)*gamma for primed
// states whose base value carries the extra -12*n1 offset.
ContinuumPrediction c_eff_state(const StateLabel& label, double phi1, double phi2,
                                double gamma);

// x_{2n1,2n2} = (n1^2+n2^2-2)/(2(k+2)) + 1/(4(k+1)), valid for n1,n2 >= 1.
double watermelon_xx(int n1, int n2, double k);
Fraction watermelon_xx_exact(int n1, int n2, long long k);

// Regime of the (2n1, 0)-leg exponent as k runs through [2, inf).
// `fixed` is the n1 = 1 case where x = 1 for every k.
enum class X0Regime { fixed, small_k, middle_k, large_k };

struct X0Result {
    double x = 0.0;
    X0Regime regime = X0Regime::fixed;
};

// Boundary k_c(n1) = sqrt(2 n1^2 + 2 n1 + 1) + n1 - 1 between the regimes
// dominated by the unprimed and the primed level.
double k_critical(int n1);

// Three-regime (2n1, 0)-leg exponent; n1 = 1 returns 1 for all k.
X0Result watermelon_x0(int n1, double k);

// The (2n1, 0)-leg ground state is whichever of two levels has the larger
// effective central charge: the unprimed (n1,0,0) at twists (0, pi-gamma)
// or the primed (n1,0,0)' at twists (0, gamma).
struct CrossoverResult {
    double c_unprimed = 0.0;
    double c_primed = 0.0;
    bool primed_dominates = false;
    X0Regime regime = X0Regime::fixed;
};
CrossoverResult crossover_compare(int n1, double k);

struct WatermelonRow {
    int l1 = 0;  // leg numbers, l = 2n
    int l2 = 0;
    double x = 0.0;
};

// Rows x_{2n1,2n2} for 1 <= n2 <= n1 <= n_max, then x_{2n1,0} for
// n1 <= n_max.  n_max at most 6.
struct ExponentTable {
    double k = 0.0;
    std::vector<WatermelonRow> xx;
    std::vector<WatermelonRow> x0;
};
ExponentTable exponent_table(double k, int n_max);

// Value rendering used by both table formats: shortest form with 6
// significant digits ("%.6g").
std::string format_exponent(double x);

// Aligned plain-text table, one column per k, rows labelled x_{l1,l2}.
std::string format_exponent_table_text(const std::vector<double>& ks, int n_max);

// Long-format CSV: header exponent,l1,l2,k,x then one row per entry.
std::string format_exponent_table_csv(const std::vector<double>& ks, int n_max);

}  // namespace cpotts
