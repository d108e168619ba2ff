#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "crn/maps.hpp"
#include "doctest.h"

using namespace crn;

namespace {
const long P = 320;

Real rnd_unit(std::mt19937_64& rng, long prec) {
    return Real((long long)(rng() % (1ull << 62)), prec).mul_2si(-62);
}
}  // namespace

TEST_CASE("lifts are degree one") {
    std::mt19937_64 rng(7);
    auto f = BiCriticalMap::arnold(Real(0.61, P), P);
    auto g = BiCriticalMap::perturbed(Real(0.61, P), {Real(0.02, P), Real(-0.01, P)}, P);
    for (int i = 0; i < 20; ++i) {
        Real x = rnd_unit(rng, P + 32) * 3ll - Real(1.0, P + 32);
        for (const auto& m : {f, g}) {
            Real d = m.lift(x + 1ll) - m.lift(x) - Real(1.0, P);
            CHECK(abs(d) <= Real::pow2(-P + 8, P));
        }
    }
}

TEST_CASE("both critical points are cubic") {
    auto f = BiCriticalMap::arnold(Real(0.4, P), P);
    auto g = BiCriticalMap::perturbed(Real(0.4, P), {Real(0.02, P)}, P);
    Real d3_expect = Real::pi(P) * Real::pi(P) * 16ll;
    for (const auto& m : {f, g}) {
        for (int i = 0; i < 2; ++i) {
            Deriv3 d = m.derivs(m.critical_point(i).rep());
            CHECK(abs(d.d1) <= Real::pow2(-P + 16, P));
            CHECK(abs(d.d2) <= Real::pow2(-P + 24, P));
            CHECK(abs(d.d3 - d3_expect) <= Real::pow2(-P + 32, P));
        }
    }
}

TEST_CASE("derivatives match central finite differences") {
    std::mt19937_64 rng(11);
    auto g = BiCriticalMap::perturbed(Real(0.37, P), {Real(0.03, P), Real(0.01, P)}, P);
    Real h = Real::pow2(-60, P + 32);
    for (int i = 0; i < 8; ++i) {
        Real x = rnd_unit(rng, P + 32);
        Deriv3 d = g.derivs(x);
        Real fp = g.lift(x + h), fm = g.lift(x - h);
        Real f2p = g.lift(x + h.mul_2si(1)), f2m = g.lift(x - h.mul_2si(1));
        Real fd1 = (fp - fm) / h.mul_2si(1);
        Real fd2 = (fp - g.lift(x).mul_2si(1) + fm) / (h * h);
        Real fd3 = (f2p - fp.mul_2si(1) + fm.mul_2si(1) - f2m) / (h * h * h).mul_2si(1);
        CHECK(abs(d.d1 - fd1) <= Real::pow2(-100, P));
        CHECK(abs(d.d2 - fd2) <= Real::pow2(-80, P));
        CHECK(abs(d.d3 - fd3) <= Real::pow2(-60, P));
    }
}

TEST_CASE("apply quantizes the lift to the grid, iterates compose") {
    auto f = BiCriticalMap::arnold(Real(0.55, P), P);
    CirclePoint p(0.3, P);
    CirclePoint one = f.apply(p);
    CHECK(one.rep() == one.rep().quantize(P));
    CHECK(f.apply_n(p, 3) == f.apply(f.apply(f.apply(p))));
    CHECK(f.apply_n(p, 0) == p);
}

TEST_CASE("iterate jets match finite differences of the iterated lift") {
    auto f = BiCriticalMap::arnold(Real(0.61, P), P);
    CirclePoint p(0.3, P);
    auto [end, jet] = f.jet_n(p, 5);

    // Independent value: the 5-fold composed lift.
    auto lift5 = [&](const Real& x) {
        Real y = x;
        for (int i = 0; i < 5; ++i) y = f.lift(y);
        return y;
    };
    Real x = p.rep().with_precision(P + 32);
    CHECK(circle_dist(end, CirclePoint(lift5(x), P)) <= Real::pow2(-P + 8, P));

    // The orbit jet differentiates the grid-quantized orbit, so compare
    // against finite differences at matching tolerance.
    Real h = Real::pow2(-50, P + 32);
    Real fd1 = (lift5(x + h) - lift5(x - h)) / h.mul_2si(1);
    Real fd2 = (lift5(x + h) - lift5(x).mul_2si(1) + lift5(x - h)) / (h * h);
    CHECK(abs(jet.d1 - fd1) <= Real::pow2(-60, P));
    CHECK(abs(jet.d2 - fd2) <= Real::pow2(-40, P));
}

TEST_CASE("monotonicity scan rejects wild coefficients") {
    CHECK_THROWS_AS(BiCriticalMap::perturbed(Real(0.5, P), {Real(3.0, P)}, P), ConfigError);
    CHECK_NOTHROW(BiCriticalMap::perturbed(Real(0.5, P), {Real(0.01, P)}, P));
}

TEST_CASE("json round trip") {
    auto g = BiCriticalMap::perturbed(Real(0.375, P), {Real(0.01, P)}, P);
    auto back = BiCriticalMap::from_json(g.to_json(), P);
    CHECK(back.family() == MapFamily::perturbed2);
    CHECK(abs(back.parameter() - g.parameter()) <= Real::pow2(-P + 8, P));
    CHECK(back.coefficients().size() == 1);

    CHECK_THROWS_AS(BiCriticalMap::from_json(nlohmann::json{{"family", "exotic"}, {"a", 0.5}}, P),
                    ConfigError);
    CHECK_THROWS_AS(BiCriticalMap::from_json(nlohmann::json{{"family", "arnold2"}}, P),
                    ConfigError);
    // String parameters parse at full precision.
    auto h = BiCriticalMap::from_json(
        nlohmann::json{{"family", "arnold2"}, {"a", "0.61803398874989484820458683436563811772"}},
        P);
    CHECK(abs(h.parameter() - Real("0.61803398874989484820458683436563811772", P)) <=
          Real::pow2(-P + 8, P));
}

TEST_CASE("conjugate shift: shifted orbits are exact translates") {
    auto f = BiCriticalMap::arnold(Real(0.57, P), P);
    Real half = Real(1.0, P).mul_2si(-1);
    auto g = f.with_conjugate_shift(half);
    CHECK(g.critical_point(0) == CirclePoint(half, P));
    CHECK(g.critical_point(1) == CirclePoint(Real(P), P));

    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        CirclePoint p(rnd_unit(rng, P).quantize(P), P);
        CirclePoint lhs = g.apply(p.plus(half));
        CirclePoint rhs = f.apply(p).plus(half);
        CHECK(lhs == rhs);  // bit-exact on the grid
    }
    // Non-grid shifts are rejected.
    CHECK_THROWS_AS(f.with_conjugate_shift(Real(1.0, P) / Real(3.0, P)), ConfigError);
}

TEST_CASE("rigid rotation family") {
    auto r = BiCriticalMap::rigid_rotation(Real(0.25, P), P);
    CHECK(!r.has_critical_points());
    CHECK_THROWS_AS(r.critical_point(0), ConfigError);
    CirclePoint p(0.5, P);
    CHECK(r.apply(p) == CirclePoint(0.75, P));
    Deriv3 d = r.derivs(Real(0.3, P));
    CHECK(d.d1 == Real(1.0, P + 32));
    CHECK(d.d2.is_zero());
}

TEST_CASE("precision change preserves the map") {
    auto f = BiCriticalMap::arnold(Real(0.5, 256), 256);
    auto g = f.with_precision(512);
    CHECK(g.precision() == 512);
    CirclePoint p(0.3, 512);
    CHECK(circle_dist(g.apply(p), f.apply(p.with_precision(256)).with_precision(512)) <=
          Real::pow2(-250, 512));
}
