#include "cpotts/cft.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cpotts {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void validate(const StateLabel& label) {
    require(label.n1 >= 0 && label.n2 >= 0 && label.j >= 0,
            "StateLabel: n1, n2, j must be non-negative");
    if (label.primed) {
        require(label.n1 >= 1, "StateLabel: primed requires n1 >= 1");
        require(label.n2 == 0, "StateLabel: primed requires n2 = 0");
        require(label.j == 0, "StateLabel: primed requires j = 0");
    }
}

double central_charge(double k) {
    require(k >= 2.0, "central_charge: k >= 2 required");
    const double c = 3.0 * k * k / ((k + 1.0) * (k + 2.0));
    const double gamma = kPi / (k + 2.0);
    const double alt = 3.0 - 12.0 * gamma / kPi + 3.0 * gamma / (kPi - gamma);
    if (std::abs(c - alt) > 1e-12)
        throw std::logic_error("central_charge: closed forms disagree");
    return c;
}

ContinuumPrediction c_eff_state(const StateLabel& label, double phi1, double phi2,
                                double gamma) {
    validate(label);
    require(gamma > 0.0 && gamma <= kPi / 4.0 + 1e-12,
            "c_eff_state: gamma in (0, pi/4] required");
    // All levels are even functions of each twist.
    const double p1 = std::abs(phi1);
    const double p2 = std::abs(phi2);
    const double s = p1 + p2;

    double base, threshold;
    if (label.primed) {
        base = 3.0 - 12.0 * label.n1 -
               6.0 * double(label.n1) * label.n1 * gamma / kPi -
               6.0 * (p1 * p1 + p2 * p2) / (kPi * gamma);
        threshold = (label.n1 - 1) * gamma;
    } else {
        base = 3.0 -
               6.0 * (double(label.n1) * label.n1 + double(label.n2) * label.n2) *
                   gamma / kPi -
               6.0 * (p1 * p1 + p2 * p2) / (kPi * gamma);
        threshold = (label.n1 + label.n2 + 2 * label.j + 1) * gamma;
    }

    ContinuumPrediction out;
    out.threshold = threshold;
    if (s >= threshold) {
        out.branch = Branch::discrete_state;
        const double d = s - threshold;
        out.c_eff = base + 3.0 * d * d / (gamma * (kPi - gamma));
        out.has_log_correction = false;
    } else {
        out.branch = Branch::continuum;
        out.c_eff = base;
        out.has_log_correction = true;
    }
    return out;
}

double watermelon_xx(int n1, int n2, double k) {
    require(n1 >= 1 && n2 >= 1, "watermelon_xx: n1, n2 >= 1 required");
    require(k >= 2.0, "watermelon_xx: k >= 2 required");
    return (double(n1) * n1 + double(n2) * n2 - 2.0) / (2.0 * (k + 2.0)) +
           1.0 / (4.0 * (k + 1.0));
}

Fraction watermelon_xx_exact(int n1, int n2, long long k) {
    require(n1 >= 1 && n2 >= 1, "watermelon_xx_exact: n1, n2 >= 1 required");
    require(k >= 2, "watermelon_xx_exact: k >= 2 required");
    const long long s = static_cast<long long>(n1) * n1 +
                        static_cast<long long>(n2) * n2 - 2;
    return Fraction(s, 2 * (k + 2)) + Fraction(1, 4 * (k + 1));
}

double k_critical(int n1) {
    require(n1 >= 1, "k_critical: n1 >= 1 required");
    return std::sqrt(2.0 * n1 * n1 + 2.0 * n1 + 1.0) + n1 - 1.0;
}

X0Result watermelon_x0(int n1, double k) {
    require(n1 >= 1, "watermelon_x0: n1 >= 1 required");
    require(k >= 2.0, "watermelon_x0: k >= 2 required");
    if (n1 == 1) return {1.0, X0Regime::fixed};

    const double nn = double(n1) * n1;
    X0Result out;
    if (k <= n1) {
        out.regime = X0Regime::small_k;
        out.x = (2.0 * (k + 1.0) * nn + k * (2.0 * k * (k + 3.0) + 3.0)) /
                (4.0 * (k + 1.0) * (k + 2.0));
    } else if (k <= k_critical(n1)) {
        out.regime = X0Regime::middle_k;
        out.x = k * (k * k + 2.0 * k * (n1 + 2.0) + nn + 4.0 * n1 + 3.0) /
                (4.0 * (k + 1.0) * (k + 2.0));
    } else {
        out.regime = X0Regime::large_k;
        out.x = -k / (4.0 * (k + 1.0) * (k + 2.0)) + nn / (2.0 * (k + 2.0)) + n1;
    }
    return out;
}

CrossoverResult crossover_compare(int n1, double k) {
    require(n1 >= 2, "crossover_compare: n1 >= 2 required");
    require(k >= 2.0, "crossover_compare: k >= 2 required");
    const double gamma = kPi / (k + 2.0);

    CrossoverResult out;
    out.c_unprimed =
        c_eff_state({n1, 0, 0, false}, 0.0, kPi - gamma, gamma).c_eff;
    out.c_primed = c_eff_state({n1, 0, 0, true}, 0.0, gamma, gamma).c_eff;
    out.primed_dominates = out.c_primed > out.c_unprimed;
    out.regime = k <= n1              ? X0Regime::small_k
                 : k <= k_critical(n1) ? X0Regime::middle_k
                                       : X0Regime::large_k;
    return out;
}

ExponentTable exponent_table(double k, int n_max) {
    require(n_max >= 1 && n_max <= 6, "exponent_table: 1 <= n_max <= 6 required");
    require(k >= 2.0, "exponent_table: k >= 2 required");
    ExponentTable t;
    t.k = k;
    for (int n1 = 1; n1 <= n_max; ++n1)
        for (int n2 = 1; n2 <= n1; ++n2)
            t.xx.push_back({2 * n1, 2 * n2, watermelon_xx(n1, n2, k)});
    for (int n1 = 1; n1 <= n_max; ++n1)
        t.x0.push_back({2 * n1, 0, watermelon_x0(n1, k).x});
    return t;
}

std::string format_exponent(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

namespace {

std::string pad(std::string s, std::size_t width) {
    while (s.size() < width) s.push_back(' ');
    return s;
}

}  // namespace

std::string format_exponent_table_text(const std::vector<double>& ks, int n_max) {
    std::vector<ExponentTable> tables;
    for (double k : ks) tables.push_back(exponent_table(k, n_max));
    if (tables.empty()) return "";

    const std::size_t w = 12;
    std::ostringstream os;
    os << pad("Exponent", w);
    for (double k : ks) os << pad("k=" + format_exponent(k), w);
    os << '\n';

    auto emit_block = [&](const std::vector<WatermelonRow> ExponentTable::* block) {
        const std::size_t rows = (tables.front().*block).size();
        for (std::size_t r = 0; r < rows; ++r) {
            const WatermelonRow& first = (tables.front().*block)[r];
            os << pad("x_{" + std::to_string(first.l1) + "," +
                          std::to_string(first.l2) + "}",
                      w);
            for (const ExponentTable& t : tables)
                os << pad(format_exponent((t.*block)[r].x), w);
            os << '\n';
        }
    };
    emit_block(&ExponentTable::xx);
    os << '\n';
    emit_block(&ExponentTable::x0);
    return os.str();
}

std::string format_exponent_table_csv(const std::vector<double>& ks, int n_max) {
    std::ostringstream os;
    os << "block,l1,l2,k,x\n";
    for (double k : ks) {
        const ExponentTable t = exponent_table(k, n_max);
        for (const WatermelonRow& r : t.xx)
            os << "xx," << r.l1 << ',' << r.l2 << ',' << format_exponent(k) << ','
               << format_exponent(r.x) << '\n';
        for (const WatermelonRow& r : t.x0)
            os << "x0," << r.l1 << ',' << r.l2 << ',' << format_exponent(k) << ','
               << format_exponent(r.x) << '\n';
    }
    return os.str();
}

}  // namespace cpotts
