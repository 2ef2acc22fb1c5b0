#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gmeasure {

/// Exact rational arithmetic for points on the torus [0,1).
/// Numerator/denominator are kept in lowest terms with den > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

    Rational operator+(const Rational& o) const {
        const __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
        const __int128 d = static_cast<__int128>(den) * o.den;
        return make_checked(n, d);
    }
    Rational operator-() const { return Rational(-num, den); }
    Rational operator-(const Rational& o) const { return *this + (-o); }
    Rational operator*(const Rational& o) const {
        return make_checked(static_cast<__int128>(num) * o.num,
                            static_cast<__int128>(den) * o.den);
    }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw std::domain_error("rational: division by zero");
        return make_checked(static_cast<__int128>(num) * o.den,
                            static_cast<__int128>(den) * o.num);
    }

    /// Doubling map x -> 2x mod 1.  Requires *this in [0,1).
    Rational doubled_mod1() const {
        __int128 n = 2 * static_cast<__int128>(num);
        if (n >= den) n -= den;
        return make_checked(n, den);
    }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    static Rational parse(const std::string& s) {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s), 1);
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }

private:
    static Rational make_checked(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        const __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational: 64-bit overflow");
        Rational r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) { const __int128 t = a % b; a = b; b = t; }
        return a;
    }
};

struct RationalHash {
    std::size_t operator()(const Rational& r) const {
        return std::hash<std::int64_t>()(r.num) * 1000003u ^ std::hash<std::int64_t>()(r.den);
    }
};

}  // namespace gmeasure
