#pragma once

#include <string>

#include "steiner/errors.hpp"
#include "steiner/rational.hpp"

namespace steiner {

/// Exact element of the quadratic field Q[sqrt(d)], stored as a + b*sqrt(d)
/// with rational a, b and d in {2, 3}.  Pure rationals carry d == 0 and mix
/// freely with either extension; mixing sqrt(2) with sqrt(3) is rejected.
///
/// Comparison is exact via sign computation (a^2 versus d*b^2), so thresholds
/// such as "gain > 0" under costs divided by sqrt(2) are decided without any
/// rounding.
class Quad {
public:
    Quad() : a_(0), b_(0), d_(0) {}
    Quad(const Rat& a) : a_(a), b_(0), d_(0) {}
    Quad(long a) : a_(a), b_(0), d_(0) {}
    Quad(int a) : a_(a), b_(0), d_(0) {}
    Quad(const Rat& a, const Rat& b, int d) : a_(a), b_(b), d_(d) {
        if (d_ != 0 && d_ != 2 && d_ != 3) throw UsageError("unsupported radicand");
        normalize();
    }

    static Quad sqrt_of(int d) { return Quad(Rat(0), Rat(1), d); }

    const Rat& rational_part() const { return a_; }
    const Rat& radical_part() const { return b_; }
    int radicand() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    /// Rational value; throws if the element has a nonzero radical part.
    const Rat& as_rational() const {
        if (!is_rational()) throw UsageError("irrational value where a rational was required");
        return a_;
    }

    int sign() const {
        int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Opposite signs: |a| vs |b|*sqrt(d) decided by squaring.
        Rat lhs = a_ * a_, rhs = b_ * b_ * d_;
        if (lhs == rhs) throw InvariantViolation("sqrt(d) behaved rationally");
        return lhs > rhs ? sa : sb;
    }

    Quad operator-() const { return Quad(-a_, -b_, d_); }

    Quad& operator+=(const Quad& o) {
        int d = unify(o);
        a_ += o.a_;
        b_ += o.b_;
        d_ = d;
        normalize();
        return *this;
    }
    Quad& operator-=(const Quad& o) { return *this += -o; }
    Quad& operator*=(const Quad& o) {
        int d = unify(o);
        Rat a = a_ * o.a_ + Rat(d) * b_ * o.b_;
        Rat b = a_ * o.b_ + b_ * o.a_;
        a_ = a;
        b_ = b;
        d_ = d;
        normalize();
        return *this;
    }
    Quad& operator/=(const Quad& o) {
        if (o.sign() == 0) throw UsageError("division by zero");
        int d = unify(o);
        // 1/(a + b sqrt d) = (a - b sqrt d)/(a^2 - d b^2); denominator is
        // nonzero because sqrt(d) is irrational for d in {2,3}.
        Rat den = o.a_ * o.a_ - Rat(d) * o.b_ * o.b_;
        Quad inv((o.a_) / den, (-o.b_) / den, d);
        return *this *= inv;
    }

    friend Quad operator+(Quad l, const Quad& r) { return l += r; }
    friend Quad operator-(Quad l, const Quad& r) { return l -= r; }
    friend Quad operator*(Quad l, const Quad& r) { return l *= r; }
    friend Quad operator/(Quad l, const Quad& r) { return l /= r; }

    friend bool operator==(const Quad& l, const Quad& r) { return (l - r).sign() == 0; }
    friend bool operator!=(const Quad& l, const Quad& r) { return !(l == r); }
    friend bool operator<(const Quad& l, const Quad& r) { return (l - r).sign() < 0; }
    friend bool operator>(const Quad& l, const Quad& r) { return (l - r).sign() > 0; }
    friend bool operator<=(const Quad& l, const Quad& r) { return (l - r).sign() <= 0; }
    friend bool operator>=(const Quad& l, const Quad& r) { return (l - r).sign() >= 0; }

    /// "p/q" for rationals, "p/q + r/s*sqrt(d)" otherwise.
    std::string str() const {
        if (is_rational()) return rat_str(a_);
        return rat_str(a_) + " + " + rat_str(b_) + "*sqrt(" + std::to_string(d_) + ")";
    }

private:
    Rat a_, b_;
    int d_;

    void normalize() {
        if (b_ == 0) d_ = 0;
    }
    int unify(const Quad& o) const {
        if (d_ == 0) return o.d_;
        if (o.d_ == 0 || o.d_ == d_) return d_;
        throw UsageError("cannot mix sqrt(2) and sqrt(3) values");
    }
};

/// Parses "sqrt2", "sqrt3" or a rational literal "p/q".
inline Quad quad_parse(const std::string& text) {
    if (text == "sqrt2") return Quad::sqrt_of(2);
    if (text == "sqrt3") return Quad::sqrt_of(3);
    return Quad(rat_parse(text));
}

} // namespace steiner
