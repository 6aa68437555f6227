#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cpotts {

// Parameter bundle for the coupled-Potts / four-state vertex model family.
// Everything is derived from the single real parameter k >= 2 via
//   sqrt(Q) = 2 cos(pi/(k+2)),  gamma = pi/(k+2),  n = 2 cos(gamma).
// All conversion identities are asserted once at construction; downstream
// code reads fields instead of re-deriving them.
struct ModelParams {
    double k;
    double Q;
    double gamma;           // crossing parameter, in (0, pi/4] for k >= 2
    double n;               // loop weight 2 cos(gamma)
    double lambda_c_plus;   // (-sqrt(Q) + sqrt(4-Q))/2, critical coupling
    double lambda_c_minus;  // (-sqrt(Q) - sqrt(4-Q))/2, the other quadratic root
    double v;               // sqrt(Q) * lambda_c_plus, spin coupling parameter
    double w;               // (Q - v^2)/(1+v)^2, inter-model coupling (+inf at v = -1)
};

// Builds the full bundle from k. Throws std::invalid_argument for k < 2,
// std::logic_error if any conversion identity fails its tolerance.
ModelParams params_from_k(double k);

// Selfdual inter-model coupling (Q - v^2)/(1+v)^2. Throws on v = -1.
double selfdual_w(double Q, double v);

// Fermi velocity pi/(pi - 4*gamma); requires 0 < gamma < pi/4.
double fermi_velocity(double gamma);

// Flat key-value view used by every output-file header.
std::vector<std::pair<std::string, double>> params_kv(const ModelParams& p);

}  // namespace cpotts
