#include "causalgap/exact.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "causalgap/errors.hpp"

namespace causalgap {

namespace {

const double kSqrt2 = std::sqrt(2.0);

int rational_sign(const Rational& r) {
    if (r == 0) return 0;
    return r > 0 ? 1 : -1;
}

}  // namespace

QSqrt2 QSqrt2::from_parts(long p, long q, long r) {
    if (r == 0) throw std::invalid_argument("QSqrt2::from_parts: zero denominator");
    return QSqrt2(Rational(p, r), Rational(q, r));
}

int QSqrt2::sign() const {
    const int sa = rational_sign(a_);
    const int sb = rational_sign(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: a + b*sqrt(2) has the sign of the dominant term,
    // decided exactly by comparing a^2 against 2*b^2.
    const Rational lhs = a_ * a_;
    const Rational rhs = 2 * b_ * b_;
    if (lhs == rhs) return 0;  // impossible for nonzero rationals, kept for safety
    return lhs > rhs ? sa : sb;
}

double QSqrt2::to_double() const {
    return a_.convert_to<double>() + b_.convert_to<double>() * kSqrt2;
}

QSqrt2& QSqrt2::operator+=(const QSqrt2& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
    // (a + b s)(c + d s) = (ac + 2bd) + (ad + bc) s  with s = sqrt(2)
    const Rational a = a_ * o.a_ + 2 * b_ * o.b_;
    const Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
    // 1/(c + d s) = (c - d s)/(c^2 - 2 d^2); the norm vanishes only at zero.
    const Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
    if (norm == 0) throw std::domain_error("QSqrt2: division by zero");
    const QSqrt2 inv(o.a_ / norm, -o.b_ / norm);
    return *this *= inv;
}

std::string QSqrt2::str() const {
    const Integer na = numerator(a_);
    const Integer da = denominator(a_);
    const Integer nb = numerator(b_);
    const Integer db = denominator(b_);
    const Integer r = lcm(da, db);
    const Integer p = na * (r / da);
    const Integer q = nb * (r / db);
    if (q == 0) {
        return p.str() + "/" + r.str();
    }
    const std::string qs = q < 0 ? "-" + Integer(-q).str() : "+" + q.str();
    return "(" + p.str() + qs + "*sqrt2)/" + r.str();
}

namespace {

// Parses an optionally signed integer starting at pos; advances pos.
Integer parse_integer(const std::string& s, size_t& pos) {
    bool negative = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        negative = s[pos] == '-';
        ++pos;
    }
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("bad exact number: '" + s + "'");
    Integer value(s.substr(start, pos - start));
    return negative ? Integer(-value) : value;
}

}  // namespace

QSqrt2 QSqrt2::parse(const std::string& s) {
    size_t pos = 0;
    Integer p, q = 0;
    if (pos < s.size() && s[pos] == '(') {
        ++pos;
        p = parse_integer(s, pos);
        if (pos >= s.size() || (s[pos] != '+' && s[pos] != '-'))
            throw ParseError("bad exact number: '" + s + "'");
        q = parse_integer(s, pos);
        const std::string tail = "*sqrt2)";
        if (s.compare(pos, tail.size(), tail) != 0)
            throw ParseError("bad exact number: '" + s + "'");
        pos += tail.size();
    } else {
        p = parse_integer(s, pos);
    }
    Integer r = 1;
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        r = parse_integer(s, pos);
        if (r <= 0) throw ParseError("bad exact number (denominator): '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("bad exact number: '" + s + "'");
    return QSqrt2(Rational(p, r), Rational(q, r));
}

std::optional<QSqrt2> snap_to_qsqrt2(double x, double tol) {
    bool found = false;
    double best_err = 0;
    long best_p = 0, best_q = 0, best_r = 1;
    for (long r = 1; r <= 1024; r *= 2) {
        for (long q = -64; q <= 64; ++q) {
            const double p_real = x * static_cast<double>(r) - static_cast<double>(q) * std::sqrt(2.0);
            const long p = std::lround(p_real);
            if (p < -64 || p > 64) continue;
            const double cand = (static_cast<double>(p) + static_cast<double>(q) * std::sqrt(2.0)) /
                                static_cast<double>(r);
            const double err = std::abs(cand - x);
            if (err >= tol) continue;
            const bool better =
                !found || err < best_err ||
                (err == best_err && (r < best_r || (r == best_r && std::labs(q) < std::labs(best_q))));
            if (better) {
                found = true;
                best_err = err;
                best_p = p;
                best_q = q;
                best_r = r;
            }
        }
    }
    if (!found) return std::nullopt;
    return QSqrt2::from_parts(best_p, best_q, best_r);
}

}  // namespace causalgap
