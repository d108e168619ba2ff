#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crn/circle.hpp"
#include "crn/maps.hpp"
#include "crn/real.hpp"
#include "crn/rotation.hpp"

namespace crn {

// Provenance of a partition endpoint: a signed iterate of a seed orbit.
// source 0 is the orbit of the marked critical point c0; source m+1 is the
// orbit of the free critical point found at level m. Combinatorial decisions
// key on provenance so equal refs always denote the same point.
struct EndpointRef {
    int source = 0;
    long long iter = 0;

    friend bool operator==(const EndpointRef& a, const EndpointRef& b) {
        return a.source == b.source && a.iter == b.iter;
    }
    friend bool operator!=(const EndpointRef& a, const EndpointRef& b) { return !(a == b); }
    friend bool operator<(const EndpointRef& a, const EndpointRef& b) {
        return a.source != b.source ? a.source < b.source : a.iter < b.iter;
    }
    std::string to_string() const;
};

struct Endpoint {
    CirclePoint pos;
    EndpointRef ref;
};

// Classical atom label: image of the level interval or of the next one.
enum class AtomKind { level_image, next_image, refined };

// Orbit of a seed point, grown by iteration on demand.
class OrbitTable {
  public:
    OrbitTable(const BiCriticalMap& f, const CirclePoint& seed) : f_(&f) {
        pts_.push_back(seed.with_precision(f.precision()));
    }
    const CirclePoint& at(std::size_t i) {
        while (pts_.size() <= i) pts_.push_back(f_->apply(pts_.back()));
        return pts_[i];
    }
    std::size_t grown() const { return pts_.size(); }

  private:
    const BiCriticalMap* f_;
    std::vector<CirclePoint> pts_;
};

// Case record for a refined level (how it was produced from the level below).
struct RefinedMeta {
    bool bridge_level = false;   // the step used the bridge decomposition
    long long a_next = 0;        // partial quotient a_{n+1} at the step
    int slot = -1;               // bridge index containing the free point
    int r = -1, l = -1;          // sweep counts toward each end
    bool has_free_point = false;
    Endpoint free_point;         // present when has_free_point
    std::vector<Endpoint> removed;  // endpoint surgery log
    std::vector<Endpoint> added;
};

// Partition of the circle into arcs whose shared endpoints carry orbit
// provenance. Endpoints are sorted counterclockwise starting at the base;
// atom k is the gap from endpoint k to endpoint k+1 (mod size).
class Partition {
  public:
    // Level-n partition by the images of the two return intervals at base.
    static Partition classical(const ReturnScheme& s, int n, OrbitTable& orbit);

    int level() const { return level_; }
    const CirclePoint& base() const { return base_; }
    std::size_t size() const { return eps_.size(); }
    const std::vector<Endpoint>& endpoints() const { return eps_; }
    const Endpoint& endpoint(std::size_t k) const { return eps_[k]; }

    Arc atom(std::size_t k) const {
        return Arc(eps_[k].pos, eps_[(k + 1) % eps_.size()].pos);
    }
    AtomKind kind(std::size_t k) const { return kinds_.empty() ? AtomKind::refined : kinds_[k]; }
    long long image_index(std::size_t k) const { return indices_.empty() ? -1 : indices_[k]; }

    // Return intervals at the base, oriented counterclockwise.
    Arc level_interval() const;   // spans base and f^{q_n}(base)
    Arc next_interval() const;    // spans base and f^{q_{n+1}}(base)

    // Index of the atom containing p (atoms are half-open [start, end)).
    std::size_t locate(const CirclePoint& p) const;

    // |1 - sum of atom lengths| (zero by construction; reported for audits).
    Real coverage_defect() const;

    // True when every endpoint of the coarser partition appears here.
    bool refines(const Partition& coarser) const;
    bool has_position(const CirclePoint& p) const;

    const RefinedMeta* meta() const { return meta_ ? &*meta_ : nullptr; }

    long long q_level() const { return qn_; }
    long long q_next() const { return qn1_; }
    int side_sign() const { return sigma_; }

  private:
    friend class PartitionTower;
    Partition() = default;
    void finish_sorted(const CirclePoint& base, std::vector<Endpoint> eps);

    int level_ = 0;
    CirclePoint base_;
    CirclePoint un_, un1_;  // f^{q_n}(base), f^{q_{n+1}}(base)
    long long qn_ = 1, qn1_ = 1;
    int sigma_ = 1;  // side of f^{q_n}(base) relative to base: +1 = ccw
    std::vector<Endpoint> eps_;
    std::vector<Real> keys_;  // ccw(base, endpoint), strictly increasing
    std::vector<AtomKind> kinds_;
    std::vector<long long> indices_;
    std::optional<RefinedMeta> meta_;
};

// The unique preimage of the second critical point inside the return domain.
struct FreeCriticalPoint {
    CirclePoint point;
    long long j = 0;            // f^j(point) = c1
    bool in_level_interval = false;  // inside I_n (else inside I_{n+1})
    Real residual;              // forward-check distance to c1
};

FreeCriticalPoint free_critical_point(const BiCriticalMap& f, const ReturnScheme& s, int n,
                                      const Partition& level_n, OrbitTable& orbit);

// Bridge-level test: a_{n+1} large and the free point well inside the bridges.
struct BridgeLevelCheck {
    bool flag = false;
    long long a_next = 0;
    int slot = -1;  // k with the free point in the k-th bridge, -1 if outside
};

BridgeLevelCheck check_bridge_level(const ReturnScheme& s, int n, const FreeCriticalPoint& fc,
                                    OrbitTable& orbit);

// Sweep counts r, l: how far the straddling interval propagates toward each
// end of the bridge chain before meeting the opposite family.
struct BridgeCounts {
    int r = 0, l = 0;
    std::vector<CirclePoint> fwd;  // free point iterates under f^{q_{n+1}}: 0..l+1
    std::vector<CirclePoint> bwd;  // pullbacks: 0..r (bwd[j] is iterate -j)
};

BridgeCounts bridge_counts(const BiCriticalMap& f, const ReturnScheme& s, int n,
                           const FreeCriticalPoint& fc, const BridgeLevelCheck& chk,
                           OrbitTable& orbit);

// Inverse of f^k restricted to a monotone arc: y in domain with f^k(y) = target.
CirclePoint pullback_on_arc(const BiCriticalMap& f, long long k, const Arc& domain,
                            const CirclePoint& target);

// Tower of classical and refined partitions over one map, sharing a scheme.
class PartitionTower {
  public:
    // Builds levels 0..depth; the scheme is computed to depth+1.
    static PartitionTower build(const BiCriticalMap& f, int depth, long long budget);

    int depth() const { return (int)refined_.size() - 1; }
    const ReturnScheme& scheme() const { return scheme_; }
    const Partition& classical_level(int n) const { return classical_[n]; }
    const Partition& refined_level(int n) const { return refined_[n]; }

  private:
    PartitionTower() = default;
    static Partition bridge_level(const BiCriticalMap& f, const ReturnScheme& s, int n,
                                  const FreeCriticalPoint& fc, const BridgeLevelCheck& chk,
                                  const BridgeCounts& bc, const Partition& prev_refined,
                                  OrbitTable& orbit);
    static Partition surgery_level(const ReturnScheme& s, int n, const Partition& classical_next,
                                   const Partition& prev_refined, OrbitTable& orbit);
    ReturnScheme scheme_;
    std::vector<Partition> classical_;
    std::vector<Partition> refined_;
};

// Adjacent-atom length ratios per level and their running maximum.
struct RealBoundsReport {
    std::vector<Real> per_level;
    Real global_max;
};
RealBoundsReport real_bounds_audit(const std::vector<Partition>& levels);

// Largest |I|/|J| over intersecting atoms of two partitions of one level.
Real comparability_constant(const Partition& a, const Partition& b);

// Per level-pair geometric refinement rate (|I|/|J|)^{1/(m-n)}; atom pairs
// with identical arcs (an atom surviving unsplit) are counted separately.
struct RefiningReport {
    struct Entry {
        int n = 0, m = 0;
        Real mu_hat;
        std::size_t pairs = 0;
        std::size_t persisted = 0;
    };
    std::vector<Entry> entries;
    Real max_mu;
};
RefiningReport refining_audit(const std::vector<Partition>& levels);

// First refined level at which each classical endpoint of the given level
// appears; reports the worst delay.
struct ReappearanceReport {
    bool all_found = false;
    int max_delay = 0;
};
ReappearanceReport endpoint_reappearance_audit(const Partition& classical_n,
                                               const std::vector<Partition>& refined);

// Distortion of f^k on M within the larger arc T, with the usual space and
// total-length controls.
struct KoebeReport {
    Real distortion;        // sup/inf of the k-step derivative over M
    Real gamma;             // sum of intermediate image lengths of T
    Real tau;               // space of T around M relative to |M|
    Real implied_constant;  // smallest C with distortion <= (1+1/tau)^2 e^{C gamma}
    bool bounded = false;
};
KoebeReport koebe_audit(const BiCriticalMap& f, const Arc& T, const Arc& M, long long k,
                        int mesh = 64);

}  // namespace crn
