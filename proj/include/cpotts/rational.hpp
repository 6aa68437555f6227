#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cpotts {

// Minimal exact fraction over int64, used where a formula is rational in its
// integer arguments and the result must be checked bit-exactly. Keeps the
// denominator positive and the pair reduced after every operation.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n) : num(n), den(1) {}
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    friend Fraction operator+(Fraction a, Fraction b) {
        return Fraction(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Fraction operator-(Fraction a, Fraction b) {
        return Fraction(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Fraction operator*(Fraction a, Fraction b) {
        return Fraction(a.num * b.num, a.den * b.den);
    }
    friend Fraction operator/(Fraction a, Fraction b) {
        if (b.num == 0) throw std::invalid_argument("Fraction: division by zero");
        return Fraction(a.num * b.den, a.den * b.num);
    }
    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace cpotts
