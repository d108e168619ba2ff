#include "crn/rotation.hpp"

#include <cmath>
#include <limits>

#include "crn/errors.hpp"

namespace crn {

namespace {

// Euclidean continued fraction of p/q with 0 < p < q.
ContinuedFraction euclid_cf(long long p, long long q) {
    ContinuedFraction cf;
    while (p > 0) {
        cf.push_back(q / p);
        long long r = q % p;
        q = p;
        p = r;
    }
    return cf;
}

struct ApplyCounter {
    long long used = 0;
    long long budget;
    explicit ApplyCounter(long long b) : budget(b) {}
    void step(long long n = 1) {
        used += n;
        if (used > budget) throw BudgetError("iterate budget exceeded while extracting returns");
    }
};

}  // namespace

std::vector<Convergent> convergents(const ContinuedFraction& cf) {
    std::vector<Convergent> out;
    out.reserve(cf.size() + 1);
    long long p0 = 0, q0 = 1;  // (p_0, q_0)
    out.push_back({p0, q0});
    if (cf.empty()) return out;
    long long p1 = 1, q1 = cf[0];
    for (std::size_t i = 0;; ++i) {
        if (cf[i] < 1) throw ConfigError("partial quotients must be >= 1");
        out.push_back({p1, q1});
        if (i + 1 == cf.size()) break;
        __int128 pn = (__int128)cf[i + 1] * p1 + p0;
        __int128 qn = (__int128)cf[i + 1] * q1 + q0;
        if (qn > (std::numeric_limits<long long>::max)() / 2)
            throw BudgetError("return times overflow 63 bits");
        p0 = p1;
        q0 = q1;
        p1 = (long long)pn;
        q1 = (long long)qn;
    }
    return out;
}

Real cf_value(const ContinuedFraction& cf, long prec) {
    if (cf.empty()) return Real(prec);
    Real t((long long)cf.back(), prec);
    for (auto it = cf.rbegin() + 1; it != cf.rend(); ++it) {
        if (*it < 1) throw ConfigError("partial quotients must be >= 1");
        t = Real((long long)*it, prec) + Real(1.0, prec) / t;
    }
    return Real(1.0, prec) / t;
}

ContinuedFraction cf_expansion(const Real& rho, int depth) {
    const long prec = rho.precision();
    if (!rho.is_positive() || rho >= Real(1.0, prec))
        throw ConfigError("cf_expansion expects rho in (0,1)");
    ContinuedFraction cf;
    Real x = rho;
    double logq = 0.0;  // log2 of the denominator growth so far
    for (int i = 0; i < depth; ++i) {
        if (x.is_zero())
            throw RationalRotationError(cf, "rational rotation number: expansion terminated");
        Real inv = Real(1.0, prec) / x;
        if (mpfr_get_exp(inv.raw()) > 60)
            throw RationalRotationError(
                cf, "rational within working precision: quotient exceeds 2^60");
        Real fl = floor(inv);
        long long a = fl.to_ll();
        if (a < 1) throw CombinatoricsError("continued fraction digit below 1");
        logq += std::log2(double(a) + 1.0);
        if (2.0 * logq > double(prec) - 16.0)
            throw RationalRotationError(
                cf, "rational within working precision: quotient exhausts the mantissa");
        cf.push_back(a);
        x = inv - fl;
    }
    return cf;
}

Real rotation_number_by_lift(const BiCriticalMap& f, const Real& x0, long long iterates) {
    if (iterates < 1) throw ConfigError("rotation_number_by_lift needs at least one iterate");
    Real x = x0.with_precision(f.precision() + 32);
    Real start = x;
    for (long long i = 0; i < iterates; ++i) x = f.lift(x);
    return (x - start) / iterates;
}

long long ReturnScheme::a(int n) const {
    if (n < 0 || n >= (int)quotients.size()) throw ConfigError("quotient index out of range");
    return quotients[n];
}

long long ReturnScheme::q(int n) const {
    if (n < 0 || n >= (int)levels.size()) throw ConfigError("return level out of range");
    return levels[n].q;
}

const CirclePoint& ReturnScheme::u(int n) const {
    if (n < 0 || n >= (int)levels.size()) throw ConfigError("return level out of range");
    return levels[n].u;
}

Real ReturnScheme::interval_length(int n) const {
    const CirclePoint& un = u(n);
    return sigma(n) > 0 ? ccw(base, un) : ccw(un, base);
}

Real ReturnScheme::level_coordinate(int n, const CirclePoint& p) const {
    Real len = interval_length(n);
    Real d = delta(base, p);
    return sigma(n) > 0 ? d / len : -d / len;
}

ReturnScheme compute_returns(const BiCriticalMap& f, const CirclePoint& base, int depth,
                             long long budget) {
    if (depth < 0) throw ConfigError("negative return depth");
    const long prec = f.precision();
    const Real tol = Real::pow2(-(prec / 2), prec);
    const Real one(1.0, prec);
    ApplyCounter counter(budget);

    ReturnScheme s;
    s.base = base.with_precision(prec);

    // Bootstrap: accumulate winding until it first reaches 1; the step count
    // is a_0 + 1 and the previous point is u_1 = f^{a_0}(base).
    CirclePoint z = s.base;
    CirclePoint u0, u1;
    long long a0 = -1;
    Real winding(prec);
    for (long long k = 1;; ++k) {
        counter.step();
        CirclePoint y = f.apply(z);
        Real disp = ccw(z, y);
        if (disp <= tol)
            throw RationalRotationError({}, "orbit stalls: rotation number 0 within tolerance");
        if (disp >= one - tol)
            throw RationalRotationError({0}, "per-step displacement reaches a full turn");
        if (k == 1) u0 = y;
        winding = winding + disp;
        if (k > 1 && circle_dist(y, s.base) <= tol) {
            long long p = winding.to_ll();  // nearest integer
            if (p < 1) p = 1;
            if (p >= k) p = k - 1;
            throw RationalRotationError(euclid_cf(p, k), "orbit closes up: rational rotation");
        }
        if (winding >= one) {
            a0 = k - 1;
            u1 = z;
            break;
        }
        z = y;
    }
    if (a0 < 1) throw CombinatoricsError("bootstrap produced a_0 < 1");

    s.levels.push_back({1, u0});
    if (depth == 0) {
        s.applications = counter.used;
        return s;
    }
    s.quotients.push_back(a0);
    s.levels.push_back({a0, u1});

    // Level n >= 1: march y_j = f^{q_{n-1} + j q_n}(base) from u_{n-1} in
    // steps of f^{q_n}; the side distance to base shrinks until the orbit
    // crosses base, and the step count at the crossing is a_n + 1.
    while ((int)s.quotients.size() < depth) {
        const int n = (int)s.quotients.size();
        const long long qprev = s.levels[n - 1].q;
        const long long qn = s.levels[n].q;
        const int side = s.sigma(n - 1);
        auto sidedist = [&](const CirclePoint& p) {
            return side > 0 ? ccw(s.base, p) : ccw(p, s.base);
        };

        CirclePoint y = s.levels[n - 1].u;
        Real d = sidedist(y);
        long long an = -1;
        CirclePoint next_u;
        constexpr long long level_cap = 1ll << 20;
        for (long long j = 1;; ++j) {
            CirclePoint prev = y;
            counter.step(qn);
            for (long long t = 0; t < qn; ++t) y = f.apply(y);
            if (circle_dist(y, s.base) <= tol) {
                ContinuedFraction cf = s.quotients;
                cf.push_back(j);
                throw RationalRotationError(cf, "orbit closes up: rational rotation");
            }
            Real dj = sidedist(y);
            if (dj > d) {  // crossed base: the previous point is u_{n+1}
                an = j - 1;
                next_u = prev;
                break;
            }
            // Returns approaching a limit short of base betray an attracting
            // periodic orbit: the rotation number is the prefix value itself.
            if (d - dj <= tol || j >= level_cap)
                throw RationalRotationError(
                    s.quotients, "returns stall at level " + std::to_string(n) +
                                     ": rotation number equals the extracted prefix");
            d = dj;
        }
        if (an < 1) throw CombinatoricsError("measured partial quotient a_" + std::to_string(n) +
                                             " < 1 (precision too low?)");
        __int128 qnext = (__int128)an * qn + qprev;
        if (qnext > (std::numeric_limits<long long>::max)() / 4)
            throw BudgetError("return times overflow");
        s.quotients.push_back(an);
        s.levels.push_back({(long long)qnext, next_u});
    }

    // Closest returns must strictly tighten on each side of the base. Levels
    // alternate sides, so only intervals two levels apart are comparable; the
    // critical point makes the two sides scale differently.
    for (int n = 2; n <= s.depth(); ++n)
        if (!(s.interval_length(n) < s.interval_length(n - 2)))
            throw CombinatoricsError("return intervals fail to shrink at level " +
                                     std::to_string(n));
    s.applications = counter.used;
    return s;
}

ReturnScheme compute_returns(const BiCriticalMap& f, int depth, long long budget) {
    CirclePoint base = f.has_critical_points() ? f.critical_point(0)
                                               : CirclePoint(Real(f.precision()), f.precision());
    return compute_returns(f, base, depth, budget);
}

long required_precision(const ContinuedFraction& cf) {
    double sum = 0.0;
    for (long long a : cf) {
        if (a < 1) throw ConfigError("partial quotients must be >= 1");
        sum += std::log2(double(a) + 1.0);
    }
    long p = 96 + (long)std::ceil(16.0 * sum);
    return p < 128 ? 128 : p;
}

int compare_quotients(const ContinuedFraction& lhs, bool finite_lhs,
                      const ContinuedFraction& rhs, bool finite_rhs) {
    const std::size_t n = lhs.size() > rhs.size() ? lhs.size() : rhs.size();
    for (std::size_t k = 0; k < n; ++k) {
        const bool l_inf = k >= lhs.size() && finite_lhs;
        const bool r_inf = k >= rhs.size() && finite_rhs;
        if (k >= lhs.size() && !finite_lhs) return 0;  // undecidable prefix: treat as equal
        if (k >= rhs.size() && !finite_rhs) return 0;
        if (l_inf && r_inf) return 0;
        long long dl = l_inf ? 0 : lhs[k];  // 0 stands in; branches below treat inf explicitly
        long long dr = r_inf ? 0 : rhs[k];
        bool l_gt = l_inf || (!r_inf && dl > dr);
        bool r_gt = r_inf || (!l_inf && dr > dl);
        if (!l_gt && !r_gt) continue;
        // Larger digit at an even index means a smaller value.
        if (l_gt) return k % 2 == 0 ? -1 : 1;
        return k % 2 == 0 ? 1 : -1;
    }
    return 0;
}

TuneResult tune_parameter(const BiCriticalMap& proto, const ContinuedFraction& target,
                          long long budget) {
    if (target.empty()) throw ConfigError("empty tuning target");
    for (long long a : target)
        if (a < 1) throw ConfigError("tuning target digits must be >= 1");
    const long prec = proto.precision();
    const long need = required_precision(target);
    if (prec < need)
        throw ConfigError("tuning needs at least " + std::to_string(need) +
                          " bits of precision for this target, got " + std::to_string(prec));

    const int depth = (int)target.size();
    CirclePoint base = proto.has_critical_points()
                           ? proto.critical_point(0)
                           : CirclePoint(Real(prec), prec);
    long long apps = 0;
    int probes = 0;

    // sign(rho(a) - rho(target)), decided from quotient prefixes.
    auto probe = [&](const Real& a) {
        ++probes;
        BiCriticalMap m = proto.with_parameter(a);
        try {
            ReturnScheme s = compute_returns(m, base, depth, budget);
            apps += s.applications;
            return compare_quotients(s.quotients, false, target, false);
        } catch (const RationalRotationError& e) {
            int c = compare_quotients(e.quotients, true, target, false);
            return c == 0 ? (target.size() % 2 == 0 ? -1 : 1) : c;  // rational boundary case
        }
    };

    const Real rho_star = cf_value(target, prec);
    Real lo = max(rho_star - Real(0.125, prec), Real(0.02, prec));
    Real hi = min(rho_star + Real(0.125, prec), Real(0.98, prec));
    for (int t = 0;; ++t) {
        if (probe(lo) < 0) break;
        lo = lo.mul_2si(-1);
        if (t >= 12) throw ConfigError("no lower tuning bracket found");
    }
    for (int t = 0;; ++t) {
        if (probe(hi) > 0) break;
        hi = hi + (Real(1.0, prec) - hi).mul_2si(-1);
        if (t >= 12) throw ConfigError("no upper tuning bracket found");
    }

    const Real min_window = Real::pow2(6 - prec, prec);
    const int max_probes = 64 + 4 * (int)prec;
    while (true) {
        Real mid = (lo + hi).mul_2si(-1);
        int c = probe(mid);
        if (c == 0) return {mid, apps, probes};
        (c < 0 ? lo : hi) = mid;
        if (hi - lo < min_window)
            throw BudgetError("tuning window collapsed below precision before matching");
        if (probes > max_probes) throw BudgetError("tuning probe budget exceeded");
    }
}

}  // namespace crn
