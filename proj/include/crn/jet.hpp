#pragma once

#include "crn/real.hpp"

namespace crn {

// First three derivatives of a one-dimensional map at a point (value kept
// separately by the caller). Composition follows Faa di Bruno up to order 3.
struct Deriv3 {
    Real d1, d2, d3;

    static Deriv3 identity(long prec) {
        return {Real(1.0, prec), Real(prec), Real(prec)};
    }

    // Derivatives of f∘g at x, given f's derivatives at g(x) and g's at x.
    friend Deriv3 compose(const Deriv3& f, const Deriv3& g) {
        Deriv3 r;
        r.d1 = f.d1 * g.d1;
        r.d2 = f.d2 * g.d1 * g.d1 + f.d1 * g.d2;
        r.d3 = f.d3 * g.d1 * g.d1 * g.d1 + 3ll * (f.d2 * g.d1 * g.d2) + f.d1 * g.d3;
        return r;
    }

    // Conjugation by the affine map A(x) = sigma*(x-c)/s: derivatives of
    // A∘f∘A^{-1} given f's derivatives at the corresponding point.
    Deriv3 affine_conj(const Real& s, int sigma) const {
        Deriv3 r;
        r.d1 = d1;
        r.d2 = sigma < 0 ? -(d2 * s) : d2 * s;
        r.d3 = d3 * s * s;
        return r;
    }
};

// Value together with derivatives; used for chart-coordinate branch
// evaluations where the value is a plain real.
struct Jet3 {
    Real v;
    Deriv3 d;
};

// Schwarzian derivative D3f/Df - (3/2)(D2f/Df)^2 from a 3-jet.
inline Real schwarzian(const Deriv3& j) {
    if (j.d1.is_zero()) throw BudgetError("schwarzian at a critical point");
    Real q = j.d2 / j.d1;
    return j.d3 / j.d1 - Real(1.5, q.precision()) * q * q;
}

}  // namespace crn
