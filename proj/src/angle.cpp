// SPDX-License-Identifier: Apache-2.0
#include "latsched/angle.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace latsched {

Rational Rational::make(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{num, den};
}

Angle Angle::pi_multiple(Rational multiple) {
    // Reduce modulo 2 (i.e. 2pi).
    const std::int64_t period = 2 * multiple.den;
    std::int64_t num = multiple.num % period;
    if (num < 0) {
        num += period;
    }
    return Angle(Rational::make(num, multiple.den));
}

Angle Angle::radians(double value) { return Angle(value); }

double Angle::to_radians() const {
    if (is_exact()) {
        return pi_multiple_value().to_double() * std::numbers::pi;
    }
    return std::get<double>(value_);
}

Angle Angle::doubled() const {
    if (is_exact()) {
        const Rational& r = pi_multiple_value();
        return pi_multiple(Rational::make(2 * r.num, r.den));
    }
    return Angle(std::fmod(2.0 * std::get<double>(value_), 2.0 * std::numbers::pi));
}

Angle Angle::negated() const {
    if (is_exact()) {
        const Rational& r = pi_multiple_value();
        return pi_multiple(Rational::make(-r.num, r.den));
    }
    return Angle(-std::get<double>(value_));
}

CliffordClass Angle::clifford_class() const {
    if (is_exact()) {
        // multiple of pi/2 <=> 2*num/den is an integer
        const Rational& r = pi_multiple_value();
        return (2 * r.num) % r.den == 0 ? CliffordClass::Clifford : CliffordClass::NonClifford;
    }
    const double x = std::get<double>(value_);
    const double quarter = std::numbers::pi / 2.0;
    const double nearest = std::round(x / quarter) * quarter;
    return std::abs(x - nearest) <= kFloatCliffordTolerance ? CliffordClass::Clifford
                                                           : CliffordClass::NonClifford;
}

int Angle::doublings_to_clifford() const {
    if (is_clifford()) {
        throw std::invalid_argument("doublings_to_clifford on a Clifford angle");
    }
    if (is_exact()) {
        std::int64_t den = pi_multiple_value().den;
        int m = 0;
        while (den % 2 == 0) {
            den /= 2;
            ++m;
        }
        // den = 2^m * odd; only powers of two ever reach pi/2 multiples.
        return den == 1 ? m - 1 : 0;
    }
    Angle a = *this;
    for (int k = 1; k <= kMaxFloatDoublings; ++k) {
        a = a.doubled();
        if (a.is_clifford()) {
            return k;
        }
    }
    return 0;
}

std::string Angle::to_qasm() const {
    if (!is_exact()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
        return buf;
    }
    const Rational& r = pi_multiple_value();
    if (r.num == 0) {
        return "0";
    }
    std::string out = "pi";
    if (r.num != 1) {
        out += "*" + std::to_string(r.num);
    }
    if (r.den != 1) {
        out += "/" + std::to_string(r.den);
    }
    return out;
}

}  // namespace latsched
