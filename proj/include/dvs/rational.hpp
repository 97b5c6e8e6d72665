#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dvs {

/// Exact rational number backed by GMP. All time, work, speed and density
/// quantities in the library use this type; floating point only appears
/// once a value is turned into power or energy.
class Rational {
public:
    Rational() = default;
    Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class value) : v_(std::move(value)) { v_.canonicalize(); }

    /// Accepts "p/q", integers and finite decimals ("0.714", "-2.5e-1").
    /// The decimal form is converted exactly, never through a double.
    static Rational parse(std::string_view text);

    /// Shortest decimal representation of a double, converted exactly.
    static Rational from_double(double value);

    const mpq_class& value() const noexcept { return v_; }
    double to_double() const { return v_.get_d(); }

    /// "p/q", or "p" when the denominator is one.
    std::string str() const;

    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class v_{0};
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Smallest integer >= r.
mpz_class ceil(const Rational& r);
/// Largest integer <= r.
mpz_class floor(const Rational& r);

/// Least common multiple of two positive rationals: the smallest positive
/// rational that is an integer multiple of both.
Rational lcm(const Rational& a, const Rational& b);

}  // namespace dvs
