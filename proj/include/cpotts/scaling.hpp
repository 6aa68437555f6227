#pragma once

#include <string>
#include <vector>

namespace cpotts {

// One (L, value) sample of an energy or exponent series.
struct SeriesPoint {
    int L = 0;
    double value = 0.0;
};

// Central-charge estimates from ground-state energies per site: each
// consecutive size triple solves E(L) = E_inf - v_F*pi*c/(6 L^2) + D/L^4
// exactly for (E_inf, c, D). Returns one (middle L, c) per triple.
std::vector<SeriesPoint> ceff_from_energies(const std::vector<SeriesPoint>& e,
                                            double v_F);

// Scaled-gap exponent estimate x(L) = (E - E0) L^2 / (2 pi v_F).
double gap_exponent(double e_gap, int L, double v_F);

// One three-point window of the log-corrected fit x(L) = x_inf + A/(B+ln L)^2.
struct LogFitWindow {
    int L_start = 0;
    double x_inf = 0.0, A = 0.0, B = 0.0;
    bool ok = false;
};

struct FitOutcome {
    double x_infinity = 0.0, A = 0.0, B = 0.0;  // from the last good window
    std::vector<LogFitWindow> windows;
    std::vector<SeriesPoint> extrapolants;  // (window start L, window x_inf)
    double final_estimate = 0.0;            // 1/L -> 0 limit of extrapolants
    double uncertainty = 0.0;               // spread of last 5 extrapolants
    std::string mode;                       // "power", "log3", "log3+linear"
    bool ok = false;
};

// Sliding three-point fit of x(L) = x_inf + A/(B+ln L)^2 (exact per window,
// scalar root-find in B), then a linear-in-1/L fit through the window
// extrapolants. Sizes below min_L are excluded.
FitOutcome fit_log_corrected(const std::vector<SeriesPoint>& x, int min_L = 8);

// Least-squares x(L) = x_inf + b/L^2 over min_L <= L <= max_L.
double fit_power_law(const std::vector<SeriesPoint>& x, int min_L, int max_L);

// Predicted log-correction amplitude 10*gamma*(pi-gamma)/(pi-4*gamma)^2.
double log_correction_amplitude(double gamma);

// Fitted-amplitude ratio A1/A2 against the squared root-count ratio
// (N1/N2)^2 for two converged series at the same magnetisation sector.
struct AmplitudeCheck {
    double a_ratio = 0.0;
    double n_ratio_sq = 0.0;
    double relative_gap = 0.0;
    bool ok = false;
};
AmplitudeCheck amplitude_conjecture_check(const FitOutcome& f1,
                                          const FitOutcome& f2, int n1,
                                          int n2);

}  // namespace cpotts
