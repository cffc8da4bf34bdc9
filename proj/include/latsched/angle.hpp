// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace latsched {

/// Rational number num/den with den > 0, always in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);

    bool operator==(const Rational&) const = default;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

enum class CliffordClass { Clifford, NonClifford };

/// Rotation angle for Rz. Stored as an exact multiple of pi when the source
/// expression allows it, otherwise as radians. Exact angles are kept in
/// [0, 2pi), i.e. the multiple is reduced modulo 2.
class Angle {
  public:
    Angle() : value_(Rational{}) {}

    static Angle pi_multiple(Rational multiple);
    static Angle pi_multiple(std::int64_t num, std::int64_t den) {
        return pi_multiple(Rational::make(num, den));
    }
    static Angle radians(double value);

    bool is_exact() const { return std::holds_alternative<Rational>(value_); }
    /// Only valid when is_exact().
    const Rational& pi_multiple_value() const { return std::get<Rational>(value_); }
    double to_radians() const;

    Angle doubled() const;
    Angle negated() const;

    /// Clifford iff the angle is a multiple of pi/2. Float angles use an
    /// absolute tolerance of 1e-12 rad against the nearest multiple.
    CliffordClass clifford_class() const;
    bool is_clifford() const { return clifford_class() == CliffordClass::Clifford; }

    /// Number of doublings K >= 1 after which the angle becomes Clifford, or
    /// 0 if no doubling (up to a cap for float angles) ever does. Requires a
    /// non-Clifford angle.
    int doublings_to_clifford() const;

    /// QASM expression, e.g. "pi*3/8" or "0.25".
    std::string to_qasm() const;

    bool operator==(const Angle&) const = default;

  private:
    explicit Angle(std::variant<Rational, double> v) : value_(v) {}
    std::variant<Rational, double> value_;
};

inline constexpr double kFloatCliffordTolerance = 1e-12;
inline constexpr int kMaxFloatDoublings = 64;

}  // namespace latsched
