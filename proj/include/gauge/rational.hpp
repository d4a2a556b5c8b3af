#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace gauge {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "7", "-5/2" or "0.125". Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when q = 1).
std::string to_string(const Rational& q);

/// Least integer >= q.
Integer ceil(const Rational& q);

/// Least integer >= log2 of a positive integer.
unsigned ceil_log2(const Integer& n);

/// A nonnegative rational or a formal +infinity.
class ExtendedValue {
public:
    ExtendedValue() : value_(Rational(0)) {}
    ExtendedValue(Rational q) : value_(std::move(q)) {}  // NOLINT: implicit by intent
    ExtendedValue(long q) : value_(Rational(q)) {}       // NOLINT

    static ExtendedValue infinity() {
        ExtendedValue v;
        v.value_.reset();
        return v;
    }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    bool is_finite() const noexcept { return value_.has_value(); }

    /// Finite value; throws DomainError on infinity.
    const Rational& value() const;

    /// 1/q with 1/0 = infinity and 1/infinity = 0.
    ExtendedValue reciprocal() const;

    friend bool operator==(const ExtendedValue& a, const ExtendedValue& b);
    friend std::strong_ordering operator<=>(const ExtendedValue& a, const ExtendedValue& b);

    friend ExtendedValue operator*(const ExtendedValue& a, const ExtendedValue& b);
    friend ExtendedValue operator+(const ExtendedValue& a, const ExtendedValue& b);

private:
    std::optional<Rational> value_;
};

ExtendedValue min(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue max(const ExtendedValue& a, const ExtendedValue& b);
std::string to_string(const ExtendedValue& v);

/// x ∸ y = max(x - y, 0)
inline Rational monus(const Rational& x, const Rational& y) {
    Rational r = x - y;
    return r > 0 ? r : Rational(0);
}

}  // namespace gauge
