#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsparse {

// Exact nonnegative rational, used wherever the sparsity threshold t enters a
// feasibility decision.  Keeping t exact means "average degree <= t" is an
// integer comparison, never a floating-point one.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    static Rational from_int(std::int64_t n) { return Rational(n, 1); }

    // Parses a nonnegative decimal string such as "0", "2", "1.5", ".25".
    static Rational parse(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("rational: empty string");
        std::string_view intpart = s, fracpart;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            intpart = s.substr(0, dot);
            fracpart = s.substr(dot + 1);
            if (fracpart.find('.') != std::string_view::npos)
                throw std::invalid_argument("rational: multiple decimal points in '" + std::string(s) + "'");
        }
        if (intpart.empty() && fracpart.empty())
            throw std::invalid_argument("rational: no digits in '" + std::string(s) + "'");
        if (intpart.size() + fracpart.size() > 18)
            throw std::invalid_argument("rational: too many digits in '" + std::string(s) + "'");
        std::int64_t n = 0;
        for (std::string_view part : {intpart, fracpart})
            for (char c : part) {
                if (c < '0' || c > '9')
                    throw std::invalid_argument("rational: bad character in '" + std::string(s) + "'");
                n = n * 10 + (c - '0');
            }
        std::int64_t d = 1;
        for (size_t i = 0; i < fracpart.size(); ++i) d *= 10;
        return Rational(n, d);
    }

    void normalize() {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        if (num < 0) throw std::invalid_argument("rational: negative value");
        std::int64_t g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }

    // floor(this * a / b) for nonnegative integers a, b>0, without overflow.
    std::int64_t floor_mul_div(std::int64_t a, std::int64_t b) const {
        __int128 top = static_cast<__int128>(num) * a;
        __int128 bot = static_cast<__int128>(den) * b;
        return static_cast<std::int64_t>(top / bot);
    }

    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num == y.num && x.den == y.den;
    }
    friend bool operator<(const Rational& x, const Rational& y) {
        return static_cast<__int128>(x.num) * y.den < static_cast<__int128>(y.num) * x.den;
    }
    friend bool operator<=(const Rational& x, const Rational& y) {
        return static_cast<__int128>(x.num) * y.den <= static_cast<__int128>(y.num) * x.den;
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace tsparse
