#pragma once

#include <vector>

#include "crn/circle.hpp"
#include "crn/maps.hpp"
#include "crn/real.hpp"

namespace crn {

// Partial quotients a_0, a_1, ... of rho = 1/(a_0 + 1/(a_1 + ...)), all >= 1.
using ContinuedFraction = std::vector<long long>;

struct Convergent {
    long long p, q;
};

// Convergent table of length cf.size()+1:
//   q_0 = 1, q_1 = a_0, q_{n+1} = a_n q_n + q_{n-1}  (p analogous, p_0 = 0, p_1 = 1).
// Consecutive rows satisfy |p_k q_{k+1} - p_{k+1} q_k| = 1.
std::vector<Convergent> convergents(const ContinuedFraction& cf);

// Value of the finite continued fraction at the given precision.
Real cf_value(const ContinuedFraction& cf, long prec);

// Expansion of rho in (0,1) to `depth` quotients. Rationals within working
// precision raise RationalRotationError at the terminating division.
ContinuedFraction cf_expansion(const Real& rho, int depth);

// Average lift displacement over `iterates` steps from x0.
Real rotation_number_by_lift(const BiCriticalMap& f, const Real& x0, long long iterates);

struct ReturnLevel {
    long long q;    // return time q_n
    CirclePoint u;  // closest return f^{q_n}(base)
};

// Closest-return data for the orbit of `base`: quotients a_0..a_{depth-1}
// plus return times and points for levels 0..depth. I_n denotes the arc
// between base and u_n on the side sigma(n) = (-1)^n.
struct ReturnScheme {
    CirclePoint base;
    ContinuedFraction quotients;
    std::vector<ReturnLevel> levels;
    long long applications = 0;  // map evaluations consumed

    int depth() const { return static_cast<int>(quotients.size()); }
    long long a(int n) const;
    long long q(int n) const;
    const CirclePoint& u(int n) const;
    int sigma(int n) const { return n % 2 == 0 ? 1 : -1; }
    // Arc length of I_n (ccw length from base for even n, to base for odd n).
    Real interval_length(int n) const;
    // Signed chart coordinate of p at level n: sigma(n) * delta(base, p) / |I_n|.
    Real level_coordinate(int n, const CirclePoint& p) const;
};

// Extracts `depth` partial quotients by marching closest returns; costs about
// 3 q_depth map applications. `budget` caps total applications.
ReturnScheme compute_returns(const BiCriticalMap& f, const CirclePoint& base, int depth,
                             long long budget);

// Returns of the orbit of the marked critical point (or of 0 for rotations).
ReturnScheme compute_returns(const BiCriticalMap& f, int depth, long long budget);

// Smallest working precision considered safe for combinatorics of depth
// |cf|: 96 + 16 * sum_i log2(a_i + 1), floored at 128.
long required_precision(const ContinuedFraction& cf);

struct TuneResult {
    Real a;                  // tuned parameter
    long long applications;  // total map evaluations across all probes
    int probes;              // bisection probes consumed
};

// Bisects the family parameter until the measured quotient prefix equals
// `target` exactly. The prototype map supplies family, coefficients and
// precision; its precision must be at least required_precision(target).
TuneResult tune_parameter(const BiCriticalMap& proto, const ContinuedFraction& target,
                          long long budget);

// Order of finite/infinite quotient sequences by rotation number value:
// sign(value(lhs) - value(rhs)). finite_* marks measured rationals whose
// expansion terminated (treated as ending with an infinite quotient).
int compare_quotients(const ContinuedFraction& lhs, bool finite_lhs,
                      const ContinuedFraction& rhs, bool finite_rhs);

}  // namespace crn
