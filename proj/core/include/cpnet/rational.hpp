#pragma once

#include <compare>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace cpnet {

/// Arbitrary-precision integer used for path counts and numerators.
using BigInt = mpz_class;

/// Exact reduced fraction with a positive denominator.
///
/// Ranks, ancestral factors and least-rank-improvement values are compared
/// for exact equality (equal ranks certify incomparability), so nothing in
/// the library ever rounds through floating point. `to_double()` exists only
/// for display.
class Rational {
public:
    Rational() = default;
    Rational(long numerator); // NOLINT(google-explicit-constructor)
    Rational(long numerator, long denominator);
    explicit Rational(const BigInt& integer);
    Rational(const BigInt& numerator, const BigInt& denominator);

    BigInt numerator() const { return value_.get_num(); }
    BigInt denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    int sign() const { return sgn(value_); }

    /// "p/q", always with an explicit denominator ("5/1", "0/1").
    std::string str() const;
    double to_double() const { return value_.get_d(); }

    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    Rational operator-() const;

    friend bool operator==(const Rational& lhs, const Rational& rhs) { return cmp(lhs.value_, rhs.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs)
    {
        const int c = cmp(lhs.value_, rhs.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    const mpq_class& raw() const { return value_; }

private:
    explicit Rational(mpq_class value);

    mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace cpnet
