#include "cpotts/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cpotts {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::logic_error("parameter identity violated: " + what);
}

}  // namespace

ModelParams params_from_k(double k) {
    if (!(k >= 2.0)) throw std::invalid_argument("params_from_k: k must be >= 2");

    ModelParams p;
    p.k = k;
    p.gamma = kPi / (k + 2.0);
    const double sqrtQ = 2.0 * std::cos(p.gamma);
    p.Q = sqrtQ * sqrtQ;
    p.n = 2.0 * std::cos(p.gamma);
    p.lambda_c_plus = 0.5 * (-sqrtQ + std::sqrt(4.0 - p.Q));
    p.lambda_c_minus = 0.5 * (-sqrtQ - std::sqrt(4.0 - p.Q));
    p.v = sqrtQ * p.lambda_c_plus;
    // v = -1 exactly at k = 6; the coupling diverges there.
    if (std::abs(1.0 + p.v) < 1e-12) {
        p.w = std::numeric_limits<double>::infinity();
    } else {
        p.w = selfdual_w(p.Q, p.v);
    }

    // Conversion identities, pinned at construction.
    require(std::abs(std::sqrt(p.Q) - 2.0 * std::cos(kPi / (k + 2.0))) <= 1e-14,
            "sqrt(Q) = 2 cos(pi/(k+2))");
    const double lc_closed = -std::sqrt(2.0) * std::sin(kPi * (k - 2.0) / (4.0 * (k + 2.0)));
    require(std::abs(p.lambda_c_plus - lc_closed) <= 1e-13, "closed form of lambda_c_plus");
    for (double lc : {p.lambda_c_plus, p.lambda_c_minus}) {
        require(std::abs(lc * lc + lc * sqrtQ + 0.5 * p.Q - 1.0) <= 1e-13,
                "lambda_c solves x^2 + x sqrt(Q) + Q/2 = 1");
    }
    require(std::abs(p.lambda_c_plus + p.lambda_c_minus + sqrtQ) <= 1e-13,
            "root sum = -sqrt(Q)");
    require(std::abs(p.lambda_c_plus * p.lambda_c_minus - (0.5 * p.Q - 1.0)) <= 1e-13,
            "root product = Q/2 - 1");
    return p;
}

double selfdual_w(double Q, double v) {
    if (v == -1.0) throw std::invalid_argument("selfdual_w: division by zero at v = -1");
    return (Q - v * v) / ((1.0 + v) * (1.0 + v));
}

double fermi_velocity(double gamma) {
    if (!(gamma > 0.0) || !(gamma < kPi / 4.0))
        throw std::invalid_argument("fermi_velocity: gamma must lie in (0, pi/4)");
    return kPi / (kPi - 4.0 * gamma);
}

std::vector<std::pair<std::string, double>> params_kv(const ModelParams& p) {
    return {{"k", p.k}, {"Q", p.Q}, {"gamma", p.gamma}, {"n", p.n},
            {"lambda_c", p.lambda_c_plus}};
}

}  // namespace cpotts
