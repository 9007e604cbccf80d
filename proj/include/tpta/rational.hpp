#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace tpta {

/// Exact arbitrary-precision rational number used for every time, duration
/// and clock value in the toolkit.
class Rational {
public:
    using backend_type = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(std::int64_t value) : value_(value) {} // NOLINT(google-explicit-constructor)
    Rational(std::int64_t numerator, std::int64_t denominator);
    explicit Rational(backend_type value) : value_(std::move(value)) {}

    /// Accepts "n", "-n", "p/q" and finite decimals such as "2.25".
    /// Throws std::invalid_argument on malformed text or a zero denominator.
    static Rational parse(std::string_view text);

    /// Canonical text: "n" for integers, "p/q" in lowest terms otherwise.
    [[nodiscard]] std::string str() const;

    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] bool is_zero() const { return value_.is_zero(); }
    [[nodiscard]] int sign() const { return value_.sign(); }

    /// Integer value; throws std::domain_error if not an integer or out of range.
    [[nodiscard]] std::int64_t to_int64() const;
    [[nodiscard]] double to_double() const;

    [[nodiscard]] const backend_type& backend() const { return value_; }

    Rational& operator+=(const Rational& rhs) { value_ += rhs.value_; return *this; }
    Rational& operator-=(const Rational& rhs) { value_ -= rhs.value_; return *this; }
    Rational& operator*=(const Rational& rhs) { value_ *= rhs.value_; return *this; }
    /// Throws std::domain_error on division by zero.
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    friend Rational operator-(const Rational& r) { return Rational(backend_type(-r.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = a.value_.compare(b.value_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    backend_type value_{0};
};

Rational abs(const Rational& r);
Rational max(const Rational& a, const Rational& b);
Rational min(const Rational& a, const Rational& b);

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace tpta

template <>
struct std::hash<tpta::Rational> {
    std::size_t operator()(const tpta::Rational& r) const noexcept
    {
        return std::hash<std::string>{}(r.str());
    }
};
