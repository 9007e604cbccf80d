#include "tpta/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tpta {

namespace mp = boost::multiprecision;

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

mp::cpp_int parse_digits(std::string_view s)
{
    mp::cpp_int out = 0;
    for (char ch : s) out = out * 10 + (ch - '0');
    return out;
}

} // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator)
{
    if (denominator == 0) throw std::domain_error("rational with zero denominator");
    value_ = backend_type(mp::cpp_int(numerator), mp::cpp_int(denominator));
}

Rational Rational::parse(std::string_view text)
{
    const std::string_view original = text;
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("malformed rational '" + std::string(original) + "'");
    };

    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    backend_type value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return fail();
        mp::cpp_int d = parse_digits(den);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(original) + "'");
        value = backend_type(parse_digits(num), d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))
            || (whole.empty() && frac.empty()))
            return fail();
        mp::cpp_int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        mp::cpp_int w = whole.empty() ? mp::cpp_int(0) : parse_digits(whole);
        mp::cpp_int f = frac.empty() ? mp::cpp_int(0) : parse_digits(frac);
        value = backend_type(w * scale + f, scale);
    } else {
        if (!all_digits(text)) return fail();
        value = backend_type(parse_digits(text));
    }
    if (negative) value = -value;
    return Rational(std::move(value));
}

std::string Rational::str() const
{
    const auto num = mp::numerator(value_);
    const auto den = mp::denominator(value_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

bool Rational::is_integer() const { return mp::denominator(value_) == 1; }

std::int64_t Rational::to_int64() const
{
    if (!is_integer()) throw std::domain_error("rational " + str() + " is not an integer");
    const auto num = mp::numerator(value_);
    if (num > std::numeric_limits<std::int64_t>::max() || num < std::numeric_limits<std::int64_t>::min())
        throw std::domain_error("rational " + str() + " out of 64-bit range");
    return static_cast<std::int64_t>(num);
}

double Rational::to_double() const { return value_.convert_to<double>(); }

Rational& Rational::operator/=(const Rational& rhs)
{
    if (rhs.is_zero()) throw std::domain_error("division by zero");
    value_ /= rhs.value_;
    return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace tpta
