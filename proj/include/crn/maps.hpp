#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crn/circle.hpp"
#include "crn/jet.hpp"
#include "crn/real.hpp"

#include "json.hpp"

namespace crn {

enum class MapFamily { arnold2, perturbed2, rotation };

std::string family_name(MapFamily f);

// Degree-one circle endomorphism with two cubic critical points (except the
// rigid-rotation family, which has none and exists for cross-checks).
//
//   arnold2:    L(x) = x + a - sin(4 pi x)/(4 pi)
//   perturbed2: arnold2 + sum_k c_k (1-cos(4 pi x))^2 sin(2 pi k x)/k^2
//   rotation:   L(x) = x + a
//
// An optional conjugate shift s replaces L by x -> L(x - s) + s, moving the
// marked critical points to s and s + 1/2; s must lie on the 2^-P grid so
// shifted orbits stay exact translates of unshifted ones.
class BiCriticalMap {
  public:
    static BiCriticalMap arnold(const Real& a, long prec);
    static BiCriticalMap perturbed(const Real& a, std::vector<Real> coeffs, long prec);
    static BiCriticalMap rigid_rotation(const Real& a, long prec);
    static BiCriticalMap from_json(const nlohmann::json& spec, long prec);

    MapFamily family() const { return family_; }
    long precision() const { return prec_; }
    const Real& parameter() const { return a_; }
    const std::vector<Real>& coefficients() const { return coeffs_; }
    const Real& conjugate_shift() const { return shift_; }

    BiCriticalMap with_precision(long prec) const;
    // Same family and coefficients, new parameter; skips the monotonicity
    // scan (the scanned derivative does not depend on the parameter).
    BiCriticalMap with_parameter(const Real& a) const;
    BiCriticalMap with_conjugate_shift(const Real& s) const;

    // Lift value at a real x, computed with guard bits beyond P.
    Real lift(const Real& x) const;
    // First three derivatives of the lift at x.
    Deriv3 derivs(const Real& x) const;

    CirclePoint apply(const CirclePoint& p) const;
    CirclePoint apply_n(const CirclePoint& p, long long n) const;
    // Orbit endpoint and the 3-jet of the n-th iterate along the orbit of p.
    std::pair<CirclePoint, Deriv3> jet_n(const CirclePoint& p, long long n) const;

    bool has_critical_points() const { return family_ != MapFamily::rotation; }
    int num_critical_points() const { return has_critical_points() ? 2 : 0; }
    // i = 0 or 1; both critical points are cubic.
    CirclePoint critical_point(int i) const;

    nlohmann::json to_json() const;

  private:
    BiCriticalMap(MapFamily fam, Real a, std::vector<Real> coeffs, Real shift, long prec,
                  bool scanned);
    // Family lift with the conjugating translation removed.
    Real lift_base(const Real& y) const;
    void scan_monotonicity() const;

    MapFamily family_;
    Real a_;
    std::vector<Real> coeffs_;
    Real shift_;
    long prec_;
};

}  // namespace crn
