#include "crn/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "crn/errors.hpp"
#include "crn/parallel.hpp"

namespace crn {

namespace {

// Signed-side coordinate inside I_n: distance from the base toward f^{q_n}(base).
Real inner_coord(const ReturnScheme& s, int n, const CirclePoint& p) {
    return s.sigma(n) > 0 ? ccw(s.base, p) : ccw(p, s.base);
}

}  // namespace

std::string EndpointRef::to_string() const {
    std::string seed = source == 0 ? "c0" : "w" + std::to_string(source - 1);
    return "f^" + std::to_string(iter) + "(" + seed + ")";
}

void Partition::finish_sorted(const CirclePoint& base, std::vector<Endpoint> eps) {
    base_ = base;
    const std::size_t n = eps.size();
    std::vector<Real> keys;
    keys.reserve(n);
    for (const auto& e : eps) keys.push_back(ccw(base, e.pos));
    std::vector<std::size_t> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(),
              [&](std::size_t i, std::size_t j) { return keys[i] < keys[j]; });
    eps_.clear();
    keys_.clear();
    eps_.reserve(n);
    keys_.reserve(n);
    for (std::size_t t : ord) {
        eps_.push_back(std::move(eps[t]));
        keys_.push_back(keys[t]);
    }
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (!(keys_[k] < keys_[k + 1]))
            throw CombinatoricsError("endpoint collision at level " + std::to_string(level_) +
                                     "; raise the working precision");
    if (keys_.empty() || !keys_[0].is_zero())
        throw CombinatoricsError("partition base is missing from its endpoint set");
    kinds_.clear();
    indices_.clear();
}

Partition Partition::classical(const ReturnScheme& s, int n, OrbitTable& orbit) {
    if (n < 0 || n + 1 > s.depth())
        throw ConfigError("classical partition needs return data one level deeper");
    Partition part;
    part.level_ = n;
    part.qn_ = s.q(n);
    part.qn1_ = s.q(n + 1);
    part.sigma_ = s.sigma(n);
    part.un_ = orbit.at((std::size_t)part.qn_);
    part.un1_ = orbit.at((std::size_t)part.qn1_);
    const long long count = part.qn_ + part.qn1_;
    std::vector<Endpoint> eps;
    eps.reserve((std::size_t)count);
    for (long long i = 0; i < count; ++i)
        eps.push_back(Endpoint{orbit.at((std::size_t)i), EndpointRef{0, i}});
    part.finish_sorted(s.base, std::move(eps));

    // Each gap between circularly consecutive orbit points is the image of one
    // return interval; the iterate offsets identify which. Labeling doubles as
    // a structural audit of the closest-return combinatorics.
    const long long qn = part.qn_, qn1 = part.qn1_;
    const int sig = part.sigma_;
    part.kinds_.resize((std::size_t)count, AtomKind::refined);
    part.indices_.resize((std::size_t)count, -1);
    for (std::size_t k = 0; k < (std::size_t)count; ++k) {
        const long long sIter = part.eps_[k].ref.iter;
        const long long eIter = part.eps_[(k + 1) % (std::size_t)count].ref.iter;
        bool levelType = sig > 0 ? (eIter == sIter + qn && sIter < qn1)
                                 : (sIter == eIter + qn && eIter < qn1);
        bool nextType = sig < 0 ? (eIter == sIter + qn1 && sIter < qn)
                                : (sIter == eIter + qn1 && eIter < qn);
        if (levelType == nextType)
            throw CombinatoricsError("atom labeling failed at level " + std::to_string(n) +
                                     " between iterates " + std::to_string(sIter) + " and " +
                                     std::to_string(eIter));
        part.kinds_[k] = levelType ? AtomKind::level_image : AtomKind::next_image;
        part.indices_[k] = levelType ? (sig > 0 ? sIter : eIter) : (sig < 0 ? sIter : eIter);
    }
    return part;
}

Arc Partition::level_interval() const {
    return sigma_ > 0 ? Arc(base_, un_) : Arc(un_, base_);
}

Arc Partition::next_interval() const {
    return sigma_ < 0 ? Arc(base_, un1_) : Arc(un1_, base_);
}

std::size_t Partition::locate(const CirclePoint& p) const {
    Real key = ccw(base_, p);
    auto it = std::upper_bound(keys_.begin(), keys_.end(), key);
    return (std::size_t)(it - keys_.begin()) - 1;
}

Real Partition::coverage_defect() const {
    Real total(0.0, base_.precision());
    for (std::size_t k = 0; k < eps_.size(); ++k) total = total + atom(k).length();
    return abs(total - 1);
}

bool Partition::has_position(const CirclePoint& p) const {
    Real key = ccw(base_, p);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    return it != keys_.end() && *it == key;
}

bool Partition::refines(const Partition& coarser) const {
    for (const auto& e : coarser.eps_)
        if (!has_position(e.pos)) return false;
    return true;
}

CirclePoint pullback_on_arc(const BiCriticalMap& f, long long k, const Arc& domain,
                            const CirclePoint& target) {
    if (k == 0) return target;
    const long prec = f.precision();
    CirclePoint ia = f.apply_n(domain.start(), k);
    CirclePoint ib = f.apply_n(domain.end(), k);
    Real ilen = ccw(ia, ib);
    Real t = ccw(ia, target);
    if (t > ilen) throw CombinatoricsError("pullback target escapes the image arc");
    Real lo(0.0, prec);
    Real hi = ccw(domain.start(), domain.end());
    const Real step = Real::pow2(-prec, prec);
    while (hi - lo > step) {
        Real mid = ((lo + hi).mul_2si(-1)).quantize(prec);
        if (!(mid > lo) || !(mid < hi)) break;
        Real im = ccw(ia, f.apply_n(domain.start().plus(mid), k));
        if (im <= t)
            lo = mid;
        else
            hi = mid;
    }
    CirclePoint ylo = domain.start().plus(lo);
    CirclePoint yhi = domain.start().plus(hi);
    Real rlo = circle_dist(f.apply_n(ylo, k), target);
    Real rhi = circle_dist(f.apply_n(yhi, k), target);
    return rlo <= rhi ? ylo : yhi;
}

FreeCriticalPoint free_critical_point(const BiCriticalMap& f, const ReturnScheme& s, int n,
                                      const Partition& level_n, OrbitTable& orbit) {
    (void)orbit;
    if (!f.has_critical_points()) throw ConfigError("map has no free critical point");
    const long prec = f.precision();
    CirclePoint c1 = f.critical_point(1);
    if (level_n.has_position(c1) || c1 == s.base)
        throw ConfigError("degenerate: critical points share an orbit");
    std::size_t k = level_n.locate(c1);
    const AtomKind kind = level_n.kind(k);
    const long long j = level_n.image_index(k);
    Arc domain =
        kind == AtomKind::level_image ? level_n.level_interval() : level_n.next_interval();
    FreeCriticalPoint out;
    out.j = j;
    out.in_level_interval = kind == AtomKind::level_image;
    out.point = pullback_on_arc(f, j, domain, c1);
    out.residual = circle_dist(f.apply_n(out.point, j), c1);
    if (out.residual > Real::pow2(24 - prec, prec))
        throw CombinatoricsError("free critical point failed its forward check at level " +
                                 std::to_string(n));
    return out;
}

BridgeLevelCheck check_bridge_level(const ReturnScheme& s, int n, const FreeCriticalPoint& fc,
                                    OrbitTable& orbit) {
    if (n + 1 >= s.depth()) throw ConfigError("bridge check needs the next partial quotient");
    BridgeLevelCheck out;
    out.a_next = s.a(n + 1);
    if (fc.in_level_interval) {
        const long long q0 = s.q(n), q1 = s.q(n + 1);
        const long long a = out.a_next;
        Real x = inner_coord(s, n, fc.point);
        auto edge = [&](long long m) {
            return inner_coord(s, n, orbit.at((std::size_t)(m * q1 + q0)));
        };
        // edge(m) strictly decreases in m; find the smallest m with edge(m) <= x.
        long long lo = 0, hi = a;
        while (lo < hi) {
            long long mid = lo + (hi - lo) / 2;
            if (edge(mid) <= x)
                hi = mid;
            else
                lo = mid + 1;
        }
        // slot m means the free point lies between edge(m) and edge(m-1)
        if (lo >= 1 && lo <= a && edge(lo) <= x) out.slot = (int)lo;
    }
    out.flag = out.a_next >= 23 && out.slot >= 11 && out.slot <= (int)(out.a_next - 10);
    return out;
}

BridgeCounts bridge_counts(const BiCriticalMap& f, const ReturnScheme& s, int n,
                           const FreeCriticalPoint& fc, const BridgeLevelCheck& chk,
                           OrbitTable& orbit) {
    if (chk.slot < 0) throw ConfigError("bridge counts need the free point inside the bridges");
    const long prec = f.precision();
    const long long q0 = s.q(n), q1 = s.q(n + 1);
    const long long a = chk.a_next;
    const int k = chk.slot;
    const Real tol = Real::pow2(4 - prec, prec);

    std::vector<Real> edge((std::size_t)a + 1, Real(0.0, prec));
    std::vector<CirclePoint> epts((std::size_t)a + 1);
    for (long long m = 0; m <= a; ++m) {
        epts[(std::size_t)m] = orbit.at((std::size_t)(m * q1 + q0));
        edge[(std::size_t)m] = inner_coord(s, n, epts[(std::size_t)m]);
        if (m > 0 && !(edge[(std::size_t)m] < edge[(std::size_t)(m - 1)]))
            throw CombinatoricsError("bridge chain out of order at level " + std::to_string(n));
    }
    auto bridge_arc = [&](long long m) {
        // bridge m sits between edge(m) and edge(m-1)
        return s.sigma(n) > 0 ? Arc(epts[(std::size_t)m], epts[(std::size_t)(m - 1)])
                              : Arc(epts[(std::size_t)(m - 1)], epts[(std::size_t)m]);
    };

    BridgeCounts out;
    out.fwd.push_back(fc.point);
    out.bwd.push_back(fc.point);
    auto fwd_to = [&](int j) {
        while ((int)out.fwd.size() <= j) out.fwd.push_back(f.apply_n(out.fwd.back(), q1));
    };
    auto bwd_to = [&](int j) {
        while ((int)out.bwd.size() <= j) {
            long long m = k - (long long)out.bwd.size();  // pullback lands in bridge m
            if (m < 1)
                throw CombinatoricsError("bridge pullback ran off the chain at level " +
                                         std::to_string(n));
            out.bwd.push_back(pullback_on_arc(f, q1, bridge_arc(m), out.bwd.back()));
        }
    };
    auto pt = [&](int m) -> const CirclePoint& {
        return m >= 0 ? out.fwd[(std::size_t)m] : out.bwd[(std::size_t)(-m)];
    };
    auto meets = [&](const Real& lo1, const Real& hi1, const Real& lo2, const Real& hi2) {
        return !(hi1 + tol < lo2) && !(hi2 + tol < lo1);
    };

    // r: first j where the straddling interval, pulled back j times, meets the
    // j-th forward image of the outermost bridge.
    out.r = -1;
    fwd_to(1);
    for (int j = 0; 1 + j <= (int)a; ++j) {
        bwd_to(j);
        Real lo1 = inner_coord(s, n, pt(1 - j));
        Real hi1 = inner_coord(s, n, pt(-j));
        if (!(lo1 < hi1))
            throw CombinatoricsError("straddling interval degenerate at level " +
                                     std::to_string(n));
        Real lo2 = edge[(std::size_t)(1 + j)];
        Real hi2 = edge[(std::size_t)j];
        if (meets(lo1, hi1, lo2, hi2)) {
            out.r = j;
            break;
        }
    }
    if (out.r < 0)
        throw CombinatoricsError("bridge families never meet toward the outer end at level " +
                                 std::to_string(n));

    // l: first j where the innermost bridge, pulled back j times, meets the
    // j-th forward image of the straddling interval.
    out.l = -1;
    for (int j = 0; j + 1 <= (int)a; ++j) {
        fwd_to(j + 1);
        Real lo1 = edge[(std::size_t)(a - j)];
        Real hi1 = edge[(std::size_t)(a - j - 1)];
        Real lo2 = inner_coord(s, n, pt(j + 1));
        Real hi2 = inner_coord(s, n, pt(j));
        if (!(lo2 < hi2))
            throw CombinatoricsError("straddling interval degenerate at level " +
                                     std::to_string(n));
        if (meets(lo1, hi1, lo2, hi2)) {
            out.l = j;
            break;
        }
    }
    if (out.l < 0)
        throw CombinatoricsError("bridge families never meet toward the inner end at level " +
                                 std::to_string(n));
    fwd_to(out.l + 1);
    return out;
}

// Refined level n+1 when the step is a bridge level: inside I_n the classical
// cuts near the free point are replaced by the straddling-interval tiles, two
// glued atoms bridge the families, and the whole list is spread around the
// circle by the return times.
Partition PartitionTower::bridge_level(const BiCriticalMap& f, const ReturnScheme& s, int n,
                                       const FreeCriticalPoint& fc, const BridgeLevelCheck& chk,
                                       const BridgeCounts& bc, const Partition& prev_refined,
                                       OrbitTable& orbit) {
    const long long q0 = s.q(n), q1 = s.q(n + 1);
    const long long a = chk.a_next;
    const int r = bc.r, l = bc.l;
    const int source = n + 1;

    struct Item {
        CirclePoint pos;
        EndpointRef ref;
    };
    auto pt = [&](int m) -> const CirclePoint& {
        return m >= 0 ? bc.fwd[(std::size_t)m] : bc.bwd[(std::size_t)(-m)];
    };
    std::vector<Item> inner;
    inner.push_back({orbit.at(0), {0, 0}});
    for (long long m = a; m >= a - l; --m)
        inner.push_back({orbit.at((std::size_t)(m * q1 + q0)), {0, m * q1 + q0}});
    for (int j = l; j >= 1 - r; --j) inner.push_back({pt(j), {source, (long long)j * q1}});
    for (long long m = r; m >= 0; --m)
        inner.push_back({orbit.at((std::size_t)(m * q1 + q0)), {0, m * q1 + q0}});

    Real prev = inner_coord(s, n, inner[0].pos);
    for (std::size_t i = 1; i < inner.size(); ++i) {
        Real x = inner_coord(s, n, inner[i].pos);
        if (!(x > prev))
            throw CombinatoricsError("bridge endpoints out of order at level " +
                                     std::to_string(n));
        prev = x;
    }

    // Spread: the orbit-seeded endpoints become plain iterates; the free-point
    // tiles are pushed forward through one full return cycle.
    std::set<long long> base_iters;
    for (long long i = 0; i < q0; ++i) {
        base_iters.insert(i);
        base_iters.insert(i + q1);
    }
    for (const auto& it : inner)
        if (it.ref.source == 0)
            for (long long j = 0; j < q1; ++j) base_iters.insert(it.ref.iter + j);
    std::vector<Endpoint> eps;
    eps.reserve(base_iters.size() + (std::size_t)((r + l) * q1));
    for (long long t : base_iters) eps.push_back(Endpoint{orbit.at((std::size_t)t), {0, t}});
    for (const auto& it : inner) {
        if (it.ref.source == 0) continue;
        CirclePoint cur = it.pos;
        eps.push_back(Endpoint{cur, it.ref});
        for (long long j = 1; j < q1; ++j) {
            cur = f.apply(cur);
            eps.push_back(Endpoint{cur, {source, it.ref.iter + j}});
        }
    }

    Partition part;
    part.level_ = n + 1;
    part.qn_ = s.q(n + 1);
    part.qn1_ = s.q(n + 2);
    part.sigma_ = s.sigma(n + 1);
    part.un_ = orbit.at((std::size_t)part.qn_);
    part.un1_ = orbit.at((std::size_t)part.qn1_);
    part.finish_sorted(s.base, std::move(eps));

    const std::size_t expected = (std::size_t)(q0 + (2 * r + 2 * l + 2) * q1);
    if (part.size() != expected)
        throw CombinatoricsError("bridge partition atom count mismatch at level " +
                                 std::to_string(n + 1) + ": " + std::to_string(part.size()) +
                                 " vs " + std::to_string(expected));

    RefinedMeta meta;
    meta.bridge_level = true;
    meta.a_next = a;
    meta.slot = chk.slot;
    meta.r = r;
    meta.l = l;
    meta.has_free_point = true;
    meta.free_point = Endpoint{fc.point, {source, 0}};

    // Endpoints of the previous refined level that the formula dropped are
    // reinstated so refinement stays mechanical.
    std::vector<Endpoint> missing;
    for (const auto& v : prev_refined.endpoints())
        if (!part.has_position(v.pos)) missing.push_back(v);
    if (!missing.empty()) {
        std::vector<Endpoint> all = part.endpoints();
        all.insert(all.end(), missing.begin(), missing.end());
        part.finish_sorted(s.base, std::move(all));
        meta.added = missing;
    }
    part.meta_ = std::move(meta);
    return part;
}

// Refined level n+1 off bridge levels: the classical partition, with each
// surviving endpoint of the previous refined level spliced back in place of
// its nearest new neighbor.
Partition PartitionTower::surgery_level(const ReturnScheme& s, int n,
                                        const Partition& classical_next,
                                        const Partition& prev_refined, OrbitTable& orbit) {
    const long prec = classical_next.base().precision();
    const auto& ceps = classical_next.endpoints();
    std::vector<char> dropped(ceps.size(), 0);
    RefinedMeta meta;
    meta.bridge_level = false;
    meta.a_next = n + 1 < s.depth() ? s.a(n + 1) : 0;

    for (const auto& v : prev_refined.endpoints()) {
        if (classical_next.has_position(v.pos)) continue;
        const std::size_t kAtom = classical_next.locate(v.pos);
        const std::size_t kNext = (kAtom + 1) % ceps.size();
        Real dLeft = ccw(ceps[kAtom].pos, v.pos);
        Real dRight = ccw(v.pos, ceps[kNext].pos);
        Real len = dLeft + dRight;
        if (abs(dLeft - dRight) <= len * Real::pow2(-(prec / 2), prec)) {
            meta.added.push_back(v);  // midpoint: keep both neighbors
            continue;
        }
        const std::size_t widx = dLeft < dRight ? kAtom : kNext;
        if (prev_refined.has_position(ceps[widx].pos)) {
            meta.added.push_back(v);  // the neighbor must survive: keep both
            continue;
        }
        if (dropped[widx])
            throw CombinatoricsError("endpoint surgery collision at level " +
                                     std::to_string(n + 1));
        dropped[widx] = 1;
        meta.removed.push_back(ceps[widx]);
        meta.added.push_back(v);
    }

    std::vector<Endpoint> eps;
    eps.reserve(ceps.size() + meta.added.size());
    for (std::size_t i = 0; i < ceps.size(); ++i)
        if (!dropped[i]) eps.push_back(ceps[i]);
    eps.insert(eps.end(), meta.added.begin(), meta.added.end());

    Partition part;
    part.level_ = n + 1;
    part.qn_ = s.q(n + 1);
    part.qn1_ = s.q(n + 2);
    part.sigma_ = s.sigma(n + 1);
    part.un_ = orbit.at((std::size_t)part.qn_);
    part.un1_ = orbit.at((std::size_t)part.qn1_);
    part.finish_sorted(s.base, std::move(eps));
    part.meta_ = std::move(meta);
    return part;
}

PartitionTower PartitionTower::build(const BiCriticalMap& f, int depth, long long budget) {
    if (depth < 0) throw ConfigError("partition tower needs depth >= 0");
    PartitionTower tower;
    tower.scheme_ = compute_returns(f, depth + 1, budget);
    OrbitTable orbit(f, tower.scheme_.base);
    for (int n = 0; n <= depth; ++n)
        tower.classical_.push_back(Partition::classical(tower.scheme_, n, orbit));
    tower.refined_.push_back(tower.classical_[0]);
    for (int n = 0; n < depth; ++n) {
        const Partition& prev = tower.refined_[(std::size_t)n];
        Partition next;
        bool bridged = false;
        if (f.has_critical_points() && tower.scheme_.a(n + 1) >= 23) {
            auto fc = free_critical_point(f, tower.scheme_, n, tower.classical_[(std::size_t)n],
                                          orbit);
            auto chk = check_bridge_level(tower.scheme_, n, fc, orbit);
            if (chk.flag) {
                auto bc = bridge_counts(f, tower.scheme_, n, fc, chk, orbit);
                next = bridge_level(f, tower.scheme_, n, fc, chk, bc, prev, orbit);
                bridged = true;
            }
        }
        if (!bridged)
            next = surgery_level(tower.scheme_, n, tower.classical_[(std::size_t)n + 1], prev,
                                 orbit);
        if (!next.refines(prev))
            throw CombinatoricsError("refined level " + std::to_string(n + 1) +
                                     " does not refine its predecessor");
        tower.refined_.push_back(std::move(next));
        if (tower.scheme_.applications + (long long)orbit.grown() > budget)
            throw BudgetError("partition tower exceeded its application budget");
    }
    return tower;
}

RealBoundsReport real_bounds_audit(const std::vector<Partition>& levels) {
    if (levels.empty()) throw ConfigError("real bounds audit needs at least one level");
    const long prec = levels[0].base().precision();
    RealBoundsReport rep;
    rep.global_max = Real(0.0, prec);
    for (const auto& part : levels) {
        const std::size_t n = part.size();
        std::vector<Real> len(n, Real(0.0, prec));
        for (std::size_t k = 0; k < n; ++k) len[k] = part.atom(k).length();
        Real worst(0.0, prec);
        for (std::size_t k = 0; k < n; ++k) {
            const Real& x = len[k];
            const Real& y = len[(k + 1) % n];
            Real ratio = x > y ? x / y : y / x;
            if (ratio > worst) worst = ratio;
        }
        rep.per_level.push_back(worst);
        if (worst > rep.global_max) rep.global_max = worst;
    }
    return rep;
}

Real comparability_constant(const Partition& a, const Partition& b) {
    if (!(a.base() == b.base())) throw ConfigError("comparability needs a common base point");
    const long prec = a.base().precision();
    auto bounds = [&](const Partition& p) {
        std::vector<Real> v;
        v.reserve(p.size() + 1);
        for (std::size_t k = 0; k < p.size(); ++k) v.push_back(ccw(p.base(), p.endpoint(k).pos));
        v.push_back(Real(1.0, prec));
        return v;
    };
    std::vector<Real> va = bounds(a), vb = bounds(b);
    Real worst(1.0, prec);
    std::size_t i = 0, j = 0;
    while (i + 1 < va.size() && j + 1 < vb.size()) {
        Real left = max(va[i], vb[j]);
        Real right = min(va[i + 1], vb[j + 1]);
        if (right > left) {
            Real la = va[i + 1] - va[i];
            Real lb = vb[j + 1] - vb[j];
            Real ratio = la > lb ? la / lb : lb / la;
            if (ratio > worst) worst = ratio;
        }
        if (va[i + 1] <= vb[j + 1])
            ++i;
        else
            ++j;
    }
    return worst;
}

RefiningReport refining_audit(const std::vector<Partition>& levels) {
    if (levels.size() < 2) throw ConfigError("refining audit needs at least two levels");
    const long prec = levels[0].base().precision();
    RefiningReport rep;
    rep.max_mu = Real(0.0, prec);
    for (std::size_t n = 0; n < levels.size(); ++n) {
        for (std::size_t m = n + 1; m < levels.size(); ++m) {
            RefiningReport::Entry e;
            e.n = (int)n;
            e.m = (int)m;
            e.mu_hat = Real(0.0, prec);
            const Partition& fine = levels[m];
            const Partition& coarse = levels[n];
            for (std::size_t k = 0; k < fine.size(); ++k) {
                Arc small = fine.atom(k);
                std::size_t kc = coarse.locate(small.start());
                Arc big = coarse.atom(kc);
                Real offs = ccw(big.start(), small.start());
                Real ls = small.length(), lb = big.length();
                if (offs + ls > lb)
                    throw CombinatoricsError("refinement broken between levels " +
                                             std::to_string(n) + " and " + std::to_string(m));
                if (offs.is_zero() && ls == lb) {
                    ++e.persisted;
                    continue;
                }
                ++e.pairs;
                Real mu = exp(log(ls / lb) / (long long)(m - n));
                if (mu > e.mu_hat) e.mu_hat = mu;
            }
            if (e.mu_hat > rep.max_mu) rep.max_mu = e.mu_hat;
            rep.entries.push_back(std::move(e));
        }
    }
    return rep;
}

ReappearanceReport endpoint_reappearance_audit(const Partition& classical_n,
                                               const std::vector<Partition>& refined) {
    ReappearanceReport rep;
    rep.all_found = true;
    for (const auto& e : classical_n.endpoints()) {
        bool found = false;
        for (std::size_t m = (std::size_t)classical_n.level(); m < refined.size(); ++m) {
            if (refined[m].has_position(e.pos)) {
                int delay = (int)m - classical_n.level();
                if (delay > rep.max_delay) rep.max_delay = delay;
                found = true;
                break;
            }
        }
        if (!found) rep.all_found = false;
    }
    return rep;
}

KoebeReport koebe_audit(const BiCriticalMap& f, const Arc& T, const Arc& M, long long k,
                        int mesh) {
    if (mesh < 2) throw ConfigError("distortion audit needs a mesh of at least 2");
    const long prec = f.precision();
    Real offs = ccw(T.start(), M.start());
    if (offs + M.length() > T.length())
        throw ConfigError("inner arc not contained in the outer arc");

    KoebeReport rep;
    rep.gamma = Real(0.0, prec);
    CirclePoint s = T.start(), e = T.end();
    for (long long j = 0; j < k; ++j) {
        Arc img(s, e);
        for (int c = 0; c < f.num_critical_points(); ++c)
            if (img.contains(f.critical_point(c)))
                throw CombinatoricsError("critical point inside an intermediate image");
        rep.gamma = rep.gamma + img.length();
        s = f.apply(s);
        e = f.apply(e);
    }

    Real lsp = ccw(T.start(), M.start());
    Real rsp = ccw(M.end(), T.end());
    Real space = min(lsp, rsp);
    if (!space.is_positive()) throw ConfigError("inner arc needs space inside the outer arc");
    rep.tau = space / M.length();

    const std::size_t pts = (std::size_t)mesh + 1;
    std::vector<Real> d1(pts, Real(0.0, prec));
    Real mlen = M.length();
    par::parallel_for(pts, [&](std::size_t i) {
        Real t = mlen * (long long)i / (long long)mesh;
        d1[i] = f.jet_n(M.start().plus(t), k).second.d1;
    });
    Real lo = d1[0], hi = d1[0];
    for (const Real& v : d1) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (!lo.is_positive())
        throw CombinatoricsError("derivative vanished on the distortion mesh");
    rep.distortion = hi / lo;

    Real one(1.0, prec);
    Real geo = one + one / rep.tau;
    geo = geo * geo;
    rep.implied_constant = rep.gamma.is_positive()
                               ? max(Real(0.0, prec), (log(rep.distortion) - log(geo)) / rep.gamma)
                               : Real(0.0, prec);
    rep.bounded = true;
    return rep;
}

}  // namespace crn
