#include "gauge/rational.hpp"

#include "gauge/error.hpp"

#include <cctype>

namespace gauge {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed rational '" + std::string(text) + "'", 0);
        Integer d{std::string(den)};
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", 0);
        result = Rational(Integer(std::string(num)), d);
        result.canonicalize();
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
            throw ParseError("malformed decimal '" + std::string(text) + "'", 0);
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Integer w = whole.empty() ? Integer(0) : Integer(std::string(whole));
        result = Rational(w * scale + Integer(std::string(frac)), scale);
        result.canonicalize();
    } else {
        if (!all_digits(body)) throw ParseError("malformed rational '" + std::string(text) + "'", 0);
        result = Rational(Integer(std::string(body)));
    }
    return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Integer ceil(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

unsigned ceil_log2(const Integer& n) {
    unsigned j = 0;
    Integer p = 1;
    while (p < n) {
        p *= 2;
        ++j;
    }
    return j;
}

const Rational& ExtendedValue::value() const {
    if (!value_) throw DomainError("value() on infinite ExtendedValue");
    return *value_;
}

ExtendedValue ExtendedValue::reciprocal() const {
    if (!value_) return ExtendedValue(0L);
    if (*value_ == 0) return infinity();
    return ExtendedValue(Rational(1 / *value_));
}

bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    int c = cmp(*a.value_, *b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

// Only products of nonnegative quantities occur; 0 * inf is taken to be 0.
ExtendedValue operator*(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.is_finite() && *a.value_ == 0) return ExtendedValue(0L);
    if (b.is_finite() && *b.value_ == 0) return ExtendedValue(0L);
    if (a.is_infinite() || b.is_infinite()) return ExtendedValue::infinity();
    return ExtendedValue(Rational(*a.value_ * *b.value_));
}

ExtendedValue operator+(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.is_infinite() || b.is_infinite()) return ExtendedValue::infinity();
    return ExtendedValue(Rational(*a.value_ + *b.value_));
}

ExtendedValue min(const ExtendedValue& a, const ExtendedValue& b) { return a <= b ? a : b; }
ExtendedValue max(const ExtendedValue& a, const ExtendedValue& b) { return a >= b ? a : b; }

std::string to_string(const ExtendedValue& v) { return v.is_infinite() ? "inf" : to_string(v.value()); }

}  // namespace gauge
