#include "crn/maps.hpp"

#include <cmath>

#include "crn/errors.hpp"

namespace crn {

namespace {
constexpr long kGuardBits = 32;

Real json_real(const nlohmann::json& v, long prec, const char* what) {
    if (v.is_string()) return Real(v.get<std::string>(), prec);
    if (v.is_number_integer()) return Real(static_cast<long long>(v.get<long long>()), prec);
    if (v.is_number()) return Real(v.get<double>(), prec);
    throw ConfigError(std::string("expected a number for ") + what);
}
}  // namespace

std::string family_name(MapFamily f) {
    switch (f) {
        case MapFamily::arnold2: return "arnold2";
        case MapFamily::perturbed2: return "perturbed2";
        case MapFamily::rotation: return "rotation";
    }
    return "?";
}

BiCriticalMap::BiCriticalMap(MapFamily fam, Real a, std::vector<Real> coeffs, Real shift,
                             long prec, bool scanned)
    : family_(fam), a_(std::move(a)), coeffs_(std::move(coeffs)), shift_(std::move(shift)),
      prec_(prec) {
    if (prec_ < Real::min_precision) throw ConfigError("map precision below the supported floor");
    a_ = a_.with_precision(prec_ + kGuardBits);
    shift_ = shift_.with_precision(prec_ + kGuardBits);
    for (auto& c : coeffs_) c = c.with_precision(prec_ + kGuardBits);
    if (!(shift_ - shift_.quantize(prec_)).is_zero())
        throw ConfigError("conjugate_shift must be a multiple of 2^-P");
    if (!scanned) scan_monotonicity();
}

BiCriticalMap BiCriticalMap::arnold(const Real& a, long prec) {
    return BiCriticalMap(MapFamily::arnold2, a, {}, Real(prec), prec, true);
}

BiCriticalMap BiCriticalMap::perturbed(const Real& a, std::vector<Real> coeffs, long prec) {
    return BiCriticalMap(MapFamily::perturbed2, a, std::move(coeffs), Real(prec), prec, false);
}

BiCriticalMap BiCriticalMap::rigid_rotation(const Real& a, long prec) {
    return BiCriticalMap(MapFamily::rotation, a, {}, Real(prec), prec, true);
}

BiCriticalMap BiCriticalMap::from_json(const nlohmann::json& spec, long prec) {
    if (!spec.is_object() || !spec.contains("family"))
        throw ConfigError("map spec must be an object with a \"family\" field");
    const std::string fam = spec.at("family").get<std::string>();
    if (!spec.contains("a")) throw ConfigError("map spec missing parameter \"a\"");
    Real a = json_real(spec.at("a"), prec + kGuardBits, "a");
    std::vector<Real> coeffs;
    if (spec.contains("coeffs")) {
        if (!spec.at("coeffs").is_array()) throw ConfigError("\"coeffs\" must be an array");
        for (const auto& c : spec.at("coeffs"))
            coeffs.push_back(json_real(c, prec + kGuardBits, "coeffs[]"));
    }
    Real shift(prec + kGuardBits);
    if (spec.contains("conjugate_shift"))
        shift = json_real(spec.at("conjugate_shift"), prec + kGuardBits, "conjugate_shift");

    BiCriticalMap m = [&]() {
        if (fam == "arnold2") {
            if (!coeffs.empty()) throw ConfigError("arnold2 takes no coefficients");
            return arnold(a, prec);
        }
        if (fam == "perturbed2") return perturbed(a, std::move(coeffs), prec);
        if (fam == "rotation") {
            if (!coeffs.empty()) throw ConfigError("rotation takes no coefficients");
            return rigid_rotation(a, prec);
        }
        throw ConfigError("unknown map family: " + fam);
    }();
    if (!shift.is_zero()) m = m.with_conjugate_shift(shift);
    return m;
}

BiCriticalMap BiCriticalMap::with_precision(long prec) const {
    return BiCriticalMap(family_, a_, coeffs_, shift_.with_precision(prec + kGuardBits), prec,
                         family_ != MapFamily::perturbed2);
}

BiCriticalMap BiCriticalMap::with_parameter(const Real& a) const {
    return BiCriticalMap(family_, a, coeffs_, shift_, prec_, true);
}

BiCriticalMap BiCriticalMap::with_conjugate_shift(const Real& s) const {
    return BiCriticalMap(family_, a_, coeffs_, s, prec_, true);
}

Real BiCriticalMap::lift_base(const Real& y0) const {
    const long wp = prec_ + kGuardBits;
    Real y = y0.with_precision(wp);
    if (family_ == MapFamily::rotation) return y + a_;

    Real theta = Real::pi(wp).mul_2si(1) * frac(y.mul_2si(1));
    Real value = y + a_ - sin(theta) / Real::pi(wp).mul_2si(2);
    if (family_ == MapFamily::perturbed2) {
        Real u = Real(1.0, wp) - cos(theta);
        u = u * u;
        for (std::size_t k = 1; k <= coeffs_.size(); ++k) {
            Real sk = sin(Real::pi(wp).mul_2si(1) * frac((long long)k * y));
            value = value + coeffs_[k - 1] * u * sk / (long long)(k * k);
        }
    }
    return value;
}

Real BiCriticalMap::lift(const Real& x) const {
    const long wp = prec_ + kGuardBits;
    if (shift_.is_zero()) return lift_base(x.with_precision(wp));
    return lift_base(x.with_precision(wp) - shift_) + shift_;
}

Deriv3 BiCriticalMap::derivs(const Real& x) const {
    const long wp = prec_ + kGuardBits;
    if (family_ == MapFamily::rotation)
        return {Real(1.0, wp), Real(wp), Real(wp)};

    Real y = x.with_precision(wp) - shift_;
    Real pi = Real::pi(wp);
    Real theta = pi.mul_2si(1) * frac(y.mul_2si(1));
    Real c = cos(theta), si = sin(theta);
    Real pi2 = pi * pi;

    Deriv3 d;
    d.d1 = Real(1.0, wp) - c;
    d.d2 = pi.mul_2si(2) * si;
    d.d3 = pi2.mul_2si(4) * c;

    if (family_ == MapFamily::perturbed2) {
        Real v = Real(1.0, wp) - c;
        Real v1 = pi.mul_2si(2) * si;
        Real v2 = pi2.mul_2si(4) * c;
        Real v3 = -(pi2 * pi).mul_2si(6) * si;
        Real u = v * v;
        Real u1 = (v * v1).mul_2si(1);
        Real u2 = (v1 * v1 + v * v2).mul_2si(1);
        Real u3 = (3ll * (v1 * v2) + v * v3).mul_2si(1);
        for (std::size_t k = 1; k <= coeffs_.size(); ++k) {
            Real w = pi.mul_2si(1) * (long long)k;
            Real sc = cos(w * y), ss = sin(Real::pi(wp).mul_2si(1) * frac((long long)k * y));
            Real s1 = w * sc;
            Real s2 = -(w * w) * ss;
            Real s3 = -(w * w * w) * sc;
            Real ck = coeffs_[k - 1] / (long long)(k * k);
            d.d1 = d.d1 + ck * (u1 * ss + u * s1);
            d.d2 = d.d2 + ck * (u2 * ss + (u1 * s1).mul_2si(1) + u * s2);
            d.d3 = d.d3 + ck * (u3 * ss + 3ll * (u2 * s1) + 3ll * (u1 * s2) + u * s3);
        }
    }
    return d;
}

CirclePoint BiCriticalMap::apply(const CirclePoint& p) const {
    if (shift_.is_zero()) return CirclePoint(lift_base(p.rep()), prec_);
    // Conjugating at grid level keeps shifted orbits exact translates of the
    // unshifted ones, which the translation-symmetry audits rely on.
    CirclePoint y = p.plus(-shift_);
    return CirclePoint(lift_base(y.rep()), prec_).plus(shift_);
}

CirclePoint BiCriticalMap::apply_n(const CirclePoint& p, long long n) const {
    if (n < 0) throw ConfigError("apply_n takes a nonnegative iterate count");
    CirclePoint t = p.with_precision(prec_);
    for (long long i = 0; i < n; ++i) t = apply(t);
    return t;
}

std::pair<CirclePoint, Deriv3> BiCriticalMap::jet_n(const CirclePoint& p, long long n) const {
    if (n < 0) throw ConfigError("jet_n takes a nonnegative iterate count");
    const long wp = prec_ + kGuardBits;
    CirclePoint t = p.with_precision(prec_);
    Deriv3 acc = Deriv3::identity(wp);
    for (long long i = 0; i < n; ++i) {
        acc = compose(derivs(t.rep()), acc);
        t = apply(t);
    }
    return {t, acc};
}

CirclePoint BiCriticalMap::critical_point(int i) const {
    if (!has_critical_points()) throw ConfigError("rotation family has no critical points");
    if (i != 0 && i != 1) throw ConfigError("critical point index must be 0 or 1");
    Real pos = shift_.with_precision(prec_ + kGuardBits);
    if (i == 1) pos = pos + Real(1.0, prec_ + kGuardBits).mul_2si(-1);
    return CirclePoint(pos, prec_);
}

void BiCriticalMap::scan_monotonicity() const {
    if (family_ != MapFamily::perturbed2) return;
    constexpr int kGrid = 1 << 14;
    std::vector<double> cd(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) cd[k] = coeffs_[k].to_double();

    const double tau = 2.0 * 3.14159265358979323846;
    for (int i = 0; i < kGrid; ++i) {
        double x = double(i) / kGrid;
        double th = 2.0 * tau * x;
        double v = 1.0 - std::cos(th), v1 = 2.0 * tau * std::sin(th);
        double d1 = v;
        for (std::size_t k = 1; k <= cd.size(); ++k) {
            double w = tau * double(k);
            double ss = std::sin(w * x), sc = std::cos(w * x);
            d1 += cd[k - 1] / double(k * k) * (2.0 * v * v1 * ss + v * v * w * sc);
        }
        if (d1 < 1e-6) {
            Real xr = Real((long long)i, prec_ + kGuardBits) / (long long)kGrid;
            if (derivs(xr + shift_).d1.is_negative())
                throw ConfigError("lift is not monotone: negative derivative at x = " +
                                  xr.to_string(20));
        }
    }
}

nlohmann::json BiCriticalMap::to_json() const {
    nlohmann::json j;
    j["family"] = family_name(family_);
    int digits = static_cast<int>(prec_ / 3.32) + 4;
    j["a"] = a_.to_string(digits);
    if (!coeffs_.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : coeffs_) arr.push_back(c.to_string(digits));
        j["coeffs"] = arr;
    }
    if (!shift_.is_zero()) j["conjugate_shift"] = shift_.to_string(digits);
    j["precision"] = prec_;
    return j;
}

}  // namespace crn
