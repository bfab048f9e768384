#ifndef CAUSALGAP_EXACT_HPP
#define CAUSALGAP_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace causalgap {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A number in the field Q(sqrt(2)): value = a + b*sqrt(2) with rational a, b.
///
/// This field contains every probability appearing in the bundled scenarios
/// (e.g. cos^2(pi/8) = (2+sqrt(2))/4) and is an ordered field, so it supports
/// exact comparison and exact simplex pivoting with no tolerances.
class QSqrt2 {
public:
    QSqrt2() : a_(0), b_(0) {}
    QSqrt2(int v) : a_(v), b_(0) {}                      // NOLINT(google-explicit-constructor)
    QSqrt2(const Rational& a) : a_(a), b_(0) {}          // NOLINT(google-explicit-constructor)
    QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static QSqrt2 sqrt2() { return QSqrt2(Rational(0), Rational(1)); }

    /// (p + q*sqrt(2)) / r with integer p, q and nonzero r.
    static QSqrt2 from_parts(long p, long q, long r);

    const Rational& rational_part() const { return a_; }
    const Rational& sqrt2_part() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    /// -1, 0 or +1. Exact: decides the sign of a + b*sqrt(2) by comparing
    /// a^2 with 2*b^2 when a and b have opposite signs.
    int sign() const;

    double to_double() const;

    QSqrt2 operator-() const { return QSqrt2(-a_, -b_); }
    QSqrt2& operator+=(const QSqrt2& o);
    QSqrt2& operator-=(const QSqrt2& o);
    QSqrt2& operator*=(const QSqrt2& o);
    QSqrt2& operator/=(const QSqrt2& o);

    friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
    friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
    friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
    friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }

    friend bool operator==(const QSqrt2& x, const QSqrt2& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const QSqrt2& x, const QSqrt2& y) { return !(x == y); }
    friend bool operator<(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() < 0; }
    friend bool operator>(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() >= 0; }

    /// Canonical string form: "p/r" for rationals (r = 1 kept explicit),
    /// "(p+q*sqrt2)/r" otherwise, with gcd(p, q, r) = 1 and r > 0.
    std::string str() const;

    /// Inverse of str(). Accepts "p", "p/r" and "(p±q*sqrt2)/r" (r optional).
    static QSqrt2 parse(const std::string& s);

private:
    Rational a_, b_;
};

/// Nearest number of the form (p + q*sqrt(2))/r with |p|, |q| <= 64 and
/// r a divisor of 1024, provided it lies within `tol` of x. Ties resolved
/// by smaller r, then smaller |q|. Returns nullopt when no candidate fits.
std::optional<QSqrt2> snap_to_qsqrt2(double x, double tol = 1e-9);

}  // namespace causalgap

#endif
