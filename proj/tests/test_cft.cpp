#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cpotts/cft.hpp"
#include "doctest.h"

using namespace cpotts;

namespace {
constexpr double kPi = std::numbers::pi;
double gamma_of_k(double k) { return kPi / (k + 2.0); }
}  // namespace

TEST_CASE("central charge closed form") {
    CHECK(central_charge(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(central_charge(4.0) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(central_charge(1e7) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK_THROWS_AS(central_charge(1.5), std::invalid_argument);
}

TEST_CASE("state label validation") {
    CHECK_NOTHROW(validate({0, 0, 0, false}));
    CHECK_NOTHROW(validate({2, 0, 0, true}));
    CHECK_THROWS_AS(validate({-1, 0, 0, false}), std::invalid_argument);
    CHECK_THROWS_AS(validate({1, 1, 0, true}), std::invalid_argument);
    CHECK_THROWS_AS(validate({0, 0, 0, true}), std::invalid_argument);
    CHECK_THROWS_AS(validate({1, 0, 2, true}), std::invalid_argument);
    CHECK_THROWS_AS(c_eff_state({0, 0, 0, false}, 0, 0, 0.9), std::invalid_argument);
}

TEST_CASE("untwisted ground state sits on the continuum branch at c = 3") {
    const auto p = c_eff_state({0, 0, 0, false}, 0.0, 0.0, 0.3);
    CHECK(p.c_eff == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(p.branch == Branch::continuum);
    CHECK(p.has_log_correction);
    CHECK(p.threshold == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("ground state at twists (gamma, gamma) reproduces the central charge") {
    // The twist sum 2*gamma exceeds the threshold gamma, so the level is
    // discrete there and its value must close back to 3k^2/((k+1)(k+2)).
    for (double k : {3.0, 4.0, 5.0, 7.3, 12.0}) {
        const double g = gamma_of_k(k);
        const auto p = c_eff_state({0, 0, 0, false}, g, g, g);
        CHECK(p.branch == Branch::discrete_state);
        CHECK_FALSE(p.has_log_correction);
        CHECK(p.c_eff == doctest::Approx(central_charge(k)).epsilon(1e-13));
    }
}

TEST_CASE("branch switch along the ratio path phi2 = 0.9 phi1") {
    const double g = 0.3;
    const double phi_star = 2.0 * g / 1.9;  // twist sum hits 2*gamma here
    const auto below = c_eff_state({1, 0, 0, false}, phi_star - 0.01,
                                   0.9 * (phi_star - 0.01), g);
    const auto above = c_eff_state({1, 0, 0, false}, phi_star + 0.01,
                                   0.9 * (phi_star + 0.01), g);
    CHECK(below.branch == Branch::continuum);
    CHECK(above.branch == Branch::discrete_state);
    CHECK(below.threshold == doctest::Approx(2.0 * g).epsilon(1e-14));
    // Discrete branch lies above the continuum extrapolation.
    const double base_above = 3.0 - 6.0 * g / kPi -
                              6.0 * (std::pow(phi_star + 0.01, 2) +
                                     std::pow(0.9 * (phi_star + 0.01), 2)) /
                                  (kPi * g);
    CHECK(above.c_eff > base_above);
}

TEST_CASE("primed level at zero twist is the unprimed value minus 12") {
    for (double g : {0.2, 0.3, 0.5, 0.7}) {
        const auto unprimed = c_eff_state({1, 0, 0, false}, 0.0, 0.0, g);
        const auto primed = c_eff_state({1, 0, 0, true}, 0.0, 0.0, g);
        CHECK(primed.c_eff == doctest::Approx(unprimed.c_eff - 12.0).epsilon(1e-13));
    }
}

TEST_CASE("c_eff_state is even in each twist") {
    const StateLabel labels[] = {{0, 0, 0, false}, {1, 0, 0, false},
                                 {2, 1, 1, false}, {2, 0, 0, true}};
    for (const auto& lab : labels)
        for (double p1 : {0.1, 0.4})
            for (double p2 : {0.2, 0.7}) {
                const double c = c_eff_state(lab, p1, p2, 0.3).c_eff;
                CHECK(c_eff_state(lab, -p1, p2, 0.3).c_eff == doctest::Approx(c));
                CHECK(c_eff_state(lab, p1, -p2, 0.3).c_eff == doctest::Approx(c));
                CHECK(c_eff_state(lab, -p1, -p2, 0.3).c_eff == doctest::Approx(c));
            }
}

TEST_CASE("branch expressions are tangent at every threshold") {
    // One-sided slopes of c_eff along a twist path must agree at the
    // detachment point: the discrete addition vanishes to second order.
    struct Probe {
        StateLabel label;
        double ratio;  // phi2 = ratio * phi1
    };
    const Probe probes[] = {{{0, 0, 0, false}, 0.0}, {{1, 0, 0, false}, 0.9},
                            {{0, 0, 1, false}, 0.5}, {{2, 0, 0, true}, 0.0},
                            {{1, 1, 0, false}, 1.0}};
    const double g = 0.3;
    const double h = 1e-8;
    for (const auto& pr : probes) {
        const double thr = c_eff_state(pr.label, 0.1, 0.1 * pr.ratio, g).threshold;
        const double s_star = thr / (1.0 + pr.ratio);  // phi1 at detachment
        auto f = [&](double s) {
            return c_eff_state(pr.label, s, pr.ratio * s, g).c_eff;
        };
        const double left = (f(s_star) - f(s_star - h)) / h;
        const double right = (f(s_star + h) - f(s_star)) / h;
        CHECK(std::abs(right - left) <= 1e-6);
        CHECK(std::abs(f(s_star + h) - f(s_star)) <= 1e-6);
        CHECK(std::abs(f(s_star - h) - f(s_star)) <= 1e-6);
    }
}

TEST_CASE("watermelon exponent with both leg numbers nonzero") {
    CHECK(watermelon_xx(1, 1, 3.0) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(watermelon_xx(2, 1, 4.0) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(watermelon_xx(3, 3, 5.0) == doctest::Approx(199.0 / 168.0).epsilon(1e-14));
    CHECK(watermelon_xx(2, 1, 4.0) == doctest::Approx(watermelon_xx(1, 2, 4.0)));
    CHECK_THROWS_AS(watermelon_xx(0, 1, 3.0), std::invalid_argument);

    // x_{2,2} = 1/(4(k+1)) decreases monotonically in k.
    double prev = watermelon_xx(1, 1, 2.0);
    CHECK(prev == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    for (double k = 2.5; k < 20.0; k += 0.5) {
        const double cur = watermelon_xx(1, 1, k);
        CHECK(cur < prev);
        CHECK(cur == doctest::Approx(1.0 / (4.0 * (k + 1.0))).epsilon(1e-14));
        prev = cur;
    }
}

TEST_CASE("three-regime exponent for (2n1, 0) legs") {
    // n1 = 1: constant exponent 1 across the whole regime.
    for (double k : {2.0, 3.0, 4.6, 10.0, 100.0}) {
        const auto r = watermelon_x0(1, k);
        CHECK(r.x == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.regime == X0Regime::fixed);
    }

    CHECK(k_critical(2) == doctest::Approx(std::sqrt(13.0) + 1.0).epsilon(1e-14));

    const auto mid = watermelon_x0(2, 3.0);
    CHECK(mid.x == doctest::Approx(1.8).epsilon(1e-14));
    CHECK(mid.regime == X0Regime::middle_k);

    const auto small = watermelon_x0(3, 2.5);
    CHECK(small.regime == X0Regime::small_k);
    const auto large = watermelon_x0(2, 10.0);
    CHECK(large.regime == X0Regime::large_k);

    // The closed forms agree at both regime boundaries.
    for (int n1 : {2, 3, 4, 5}) {
        const double kc = k_critical(n1);
        const double eps = 1e-9;
        CHECK(watermelon_x0(n1, kc - eps).x ==
              doctest::Approx(watermelon_x0(n1, kc + eps).x).epsilon(1e-7));
        if (n1 > 2) {
            CHECK(watermelon_x0(n1, n1 - eps).x ==
                  doctest::Approx(watermelon_x0(n1, n1 + eps).x).epsilon(1e-7));
        }
    }
}

TEST_CASE("crossover between the primed and unprimed candidate levels") {
    const auto far_out = crossover_compare(2, 10.0);
    CHECK(far_out.primed_dominates);
    CHECK(far_out.regime == X0Regime::large_k);

    const auto mid = crossover_compare(2, 3.0);
    CHECK_FALSE(mid.primed_dominates);
    CHECK(mid.regime == X0Regime::middle_k);

    // At k_c the two candidate central charges coincide.
    for (int n1 : {2, 3, 4}) {
        const auto at_kc = crossover_compare(n1, k_critical(n1));
        CHECK(at_kc.c_unprimed == doctest::Approx(at_kc.c_primed).epsilon(1e-10));
    }

    // Away from the boundary the dominance matches the regime tag.
    for (int n1 : {2, 3, 4})
        for (double k : {2.0, 2.4, 3.0, 4.0, 6.0, 9.0, 20.0}) {
            if (std::abs(k - k_critical(n1)) < 0.2) continue;
            const auto r = crossover_compare(n1, k);
            CHECK(r.primed_dominates == (r.regime == X0Regime::large_k));
        }
}

TEST_CASE("exponents close against the effective central charges") {
    // x = (c - c_eff)/12 ties the watermelon values to the level spectrum:
    // the (2n1, 2n2)-leg sector uses the untwisted (n1, n2, 0) level, the
    // (2n1, 0) sector whichever candidate dominates at its own twists.
    for (double k : {2.5, 3.0, 4.0, 5.0, 8.0}) {
        const double g = gamma_of_k(k);
        const double c = central_charge(k);
        for (int n1 = 1; n1 <= 3; ++n1) {
            for (int n2 = 1; n2 <= n1; ++n2) {
                const double ceff =
                    c_eff_state({n1, n2, 0, false}, 0.0, 0.0, g).c_eff;
                CHECK(watermelon_xx(n1, n2, k) ==
                      doctest::Approx((c - ceff) / 12.0).epsilon(1e-12));
            }
            if (n1 >= 2) {
                const auto cr = crossover_compare(n1, k);
                const double dominant = std::max(cr.c_unprimed, cr.c_primed);
                CHECK(watermelon_x0(n1, k).x ==
                      doctest::Approx((c - dominant) / 12.0).epsilon(1e-12));
            }
        }
        // n1 = 1: the primed level dominates throughout and pins x = 1.
        const double c_primed = c_eff_state({1, 0, 0, true}, 0.0, g, g).c_eff;
        CHECK((c - c_primed) / 12.0 == doctest::Approx(1.0).epsilon(1e-13));
    }
}

namespace {
struct PrintedValue {
    int n1, n2;
    long long k;
    long long num, den;  // exact reduced fraction, derived by hand
    const char* printed;
};
// All printed six-digit table values for k = 3, 4, 5.
const PrintedValue kPrintedTable[] = {
    {1, 1, 3, 1, 16, "0.0625"},     {2, 1, 3, 29, 80, "0.3625"},
    {2, 2, 3, 53, 80, "0.6625"},    {3, 1, 3, 69, 80, "0.8625"},
    {3, 2, 3, 93, 80, "1.1625"},    {3, 3, 3, 133, 80, "1.6625"},
    {1, 1, 4, 1, 20, "0.05"},       {2, 1, 4, 3, 10, "0.3"},
    {2, 2, 4, 11, 20, "0.55"},      {3, 1, 4, 43, 60, "0.716667"},
    {3, 2, 4, 29, 30, "0.966667"},  {3, 3, 4, 83, 60, "1.38333"},
    {1, 1, 5, 1, 24, "0.0416667"},  {2, 1, 5, 43, 168, "0.255952"},
    {2, 2, 5, 79, 168, "0.470238"}, {3, 1, 5, 103, 168, "0.613095"},
    {3, 2, 5, 139, 168, "0.827381"}, {3, 3, 5, 199, 168, "1.18452"},
};
}  // namespace

TEST_CASE("printed exponent table, exact rationals and rendered digits") {
    for (const auto& row : kPrintedTable) {
        const Fraction exact = watermelon_xx_exact(row.n1, row.n2, row.k);
        CHECK(exact == Fraction(row.num, row.den));
        CHECK(format_exponent(exact.value()) == row.printed);
        CHECK(format_exponent(watermelon_xx(row.n1, row.n2, double(row.k))) ==
              row.printed);
    }
}

TEST_CASE("table assembly and rendering") {
    const ExponentTable t = exponent_table(3.0, 3);
    REQUIRE(t.xx.size() == 6);
    CHECK(t.xx[0].l1 == 2);
    CHECK(t.xx[0].l2 == 2);
    CHECK(t.xx[1].l1 == 4);
    CHECK(t.xx[1].l2 == 2);
    CHECK(t.xx[5].l1 == 6);
    CHECK(t.xx[5].l2 == 6);
    REQUIRE(t.x0.size() == 3);
    CHECK(t.x0[0].x == doctest::Approx(1.0));

    const std::string text = format_exponent_table_text({3.0, 4.0, 5.0}, 3);
    for (const auto& row : kPrintedTable)
        CHECK(text.find(row.printed) != std::string::npos);
    CHECK(text.find("x_{2,2}") != std::string::npos);
    CHECK(text.find("x_{6,0}") != std::string::npos);

    const std::string csv = format_exponent_table_csv({3.0}, 2);
    CHECK(csv.rfind("block,l1,l2,k,x\n", 0) == 0);
    CHECK(csv.find("xx,2,2,3,0.0625") != std::string::npos);
    CHECK(csv.find("x0,2,0,3,1") != std::string::npos);

    CHECK_THROWS_AS(exponent_table(3.0, 7), std::invalid_argument);
}
