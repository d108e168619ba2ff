#pragma once

#include "crn/real.hpp"

namespace crn {

// Point on the circle R/Z. The representative lives in [0,1) and is kept on
// the dyadic grid 2^-P (P = precision). Grid arithmetic makes translations
// and arc lengths exact, so the error model for positions is absolute: one
// map application contributes at most 2^(-P-1) of position error.
class CirclePoint {
  public:
    CirclePoint() = default;
    explicit CirclePoint(const Real& x) : rep_(reduce(x, x.precision())) {}
    CirclePoint(const Real& x, long prec) : rep_(reduce(x, prec)) {}
    CirclePoint(double x, long prec) : rep_(reduce(Real(x, prec + 8), prec)) {}

    const Real& rep() const { return rep_; }
    long precision() const { return rep_.precision(); }

    CirclePoint with_precision(long prec) const { return CirclePoint(rep_, prec); }

    // Counterclockwise displacement from a to b, in [0,1). Exact on the grid.
    friend Real ccw(const CirclePoint& a, const CirclePoint& b) {
        Real d = b.rep_ - a.rep_;
        if (d.is_negative()) d = d + 1;
        return d;
    }

    // Signed displacement from a to b in (-1/2, 1/2], positive = ccw.
    friend Real delta(const CirclePoint& a, const CirclePoint& b) {
        Real d = ccw(a, b);
        Real half(0.5, d.precision());
        if (d > half) d = d - 1;
        return d;
    }

    // Translation by t (mod 1); exact when t is a grid multiple. The sum is
    // formed with two extra bits so a pre-wrap value in [1,2) keeps its low bit.
    CirclePoint plus(const Real& t) const {
        long wp = (precision() > t.precision() ? precision() : t.precision()) + 2;
        return CirclePoint(rep_.with_precision(wp) + t.with_precision(wp), precision());
    }

    // Distance to the nearest representative of b.
    friend Real circle_dist(const CirclePoint& a, const CirclePoint& b) {
        return abs(delta(a, b));
    }

    // Equality within the default tolerance 2^(4-P) of the coarser precision.
    friend bool circle_eq(const CirclePoint& a, const CirclePoint& b) {
        long p = a.precision() < b.precision() ? a.precision() : b.precision();
        return circle_dist(a, b) <= Real::pow2(4 - p, p);
    }

    friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const CirclePoint& a, const CirclePoint& b) { return !(a == b); }

  private:
    // Wrap to [0,1) at the input's own precision, then round once onto the
    // grid. A single rounding keeps quantization commuting with exact shifts.
    static Real reduce(const Real& x, long prec) {
        Real r = frac(x).quantize(prec);
        if (r >= Real(1.0, prec)) r = r - 1;  // quantize rounded up to a full turn
        return r.with_precision(prec);
    }

    Real rep_{};
};

// Positively oriented (counterclockwise) closed arc from start to end.
// start == end denotes the full circle; there is no empty arc.
class Arc {
  public:
    Arc(const CirclePoint& s, const CirclePoint& e) : start_(s), end_(e) {}

    // Arc of the given length; zero or negative length is rejected.
    static Arc from_length(const CirclePoint& s, const Real& len) {
        if (!len.is_positive()) throw ConfigError("arc with non-positive length");
        if (len > Real(1.0, len.precision())) throw ConfigError("arc longer than the circle");
        return Arc(s, s.plus(len));
    }

    const CirclePoint& start() const { return start_; }
    const CirclePoint& end() const { return end_; }

    // Length in (0, 1]; start == end gives 1 (full circle).
    Real length() const {
        Real d = ccw(start_, end_);
        if (d.is_zero()) return Real(1.0, d.precision());
        return d;
    }

    // Strict interior containment.
    bool contains(const CirclePoint& p) const {
        Real d = ccw(start_, p);
        if (d.is_zero()) return false;
        Real len = ccw(start_, end_);
        if (len.is_zero()) return true;  // full circle: everything but the endpoint
        return d < len;
    }

    // Closed containment with endpoint tolerance tol.
    bool contains_closed(const CirclePoint& p, const Real& tol) const {
        Real d = ccw(start_, p);
        Real len = length();
        return d <= len + tol || d >= Real(1.0, d.precision()) - tol;
    }

    Arc complement() const { return Arc(end_, start_); }

    // Closed overlap (single shared point counts), with endpoint tolerance.
    friend bool arcs_overlap(const Arc& a, const Arc& b, const Real& tol) {
        return a.contains_closed(b.start_, tol) || b.contains_closed(a.start_, tol);
    }

  private:
    CirclePoint start_;
    CirclePoint end_;
};

}  // namespace crn
