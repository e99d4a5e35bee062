#pragma once

#ifdef __FAST_MATH__
#error "fast-math breaks the error-free transformations in this header"
#endif

#include <cmath>

namespace qortho {

// Double-double value: hi + lo with |lo| <= ulp(hi)/2.
// Knuth two-sum / Dekker two-prod building blocks; ~106-bit significand.
// Series with terminating parameter q^{-n} cancel down from terms of size
// q^{-n(n-1)/2}; the extra word keeps those sums meaningful for n <= 12.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// requires |a| >= |b| (or a == 0)
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace detail

inline dd operator+(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd s = detail::quick_two_sum(q1, q2);
    return s + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }

inline dd fabs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

// b^e by binary exponentiation; e may be negative.
inline dd powi(dd b, long e) {
    if (e < 0) return dd(1.0) / powi(b, -e);
    dd r(1.0), p = b;
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1UL) r *= p;
        p *= p;
        n >>= 1;
    }
    return r;
}

inline dd dd_sqrt(dd a) {
    if (a.hi == 0.0) return dd(0.0);
    double x = std::sqrt(a.hi);
    dd x2 = detail::two_prod(x, x);
    // one Newton step: x + (a - x^2)/(2x)
    dd corr = (a - x2) / dd(2.0 * x);
    return dd(x) + corr;
}

} // namespace qortho
