#pragma once

#include "double/lamination.hpp"
#include "double/snake.hpp"

#include <vector>

namespace dbl {

// Symbolic D-point of a triangulation: B_j and X_j over the internal edges, in the
// variable order used by initial_state(..., StateKind::D), plus the X-hat monomials.
struct DVariables {
    VarSet vars;
    std::vector<RationalExpr> b, x, xhat;
};
DVariables d_variables(const Triangulation& t);

// Trace of the monodromy along a loop word raised to the given power. `vars` has
// one variable per internal edge; the sign is fixed by a positive leading coefficient.
LaurentExpr monodromy_trace(const Triangulation& t, const TurnWord& w, const VarSet& vars, long power = 1);

// value = num / den * B^b_exponents * X^x_exponents.
struct PairingValue {
    LaurentExpr num, den;
    Exponent b_exponents, x_exponents;  // over the internal edges
    RationalExpr value() const;
};

// Pairing of a weighted loop. Loops that go once around a puncture use `reversed`
// to decide whether the puncture's orientation agrees with S.
PairingValue loop_pairing(const Triangulation& t, const LoopCurve& c, const std::set<int>& reversed = {});
// Pairing of a weighted intersecting curve whose boundary orientations agree with S.
PairingValue intersecting_pairing(const Triangulation& t, const IntersectingCurve& c);

// Edges around a puncture in counterclockwise order: eta has N+1 entries (the first
// repeated at the end) and zeta the N opposite sides.
struct Fan {
    std::vector<int> eta, zeta;
};
Fan fan_at_puncture(const Triangulation& t, int vertex, int first = 0);
RationalExpr kappa(const Triangulation& t, const Fan& fan, const DVariables& d);
RationalExpr kappa(const Triangulation& t, int puncture);

// Punctures met by an intersecting curve.
std::set<int> punctures_met(const Triangulation& t, const IntersectingCurve& c);

RationalExpr pair_lamination(const Triangulation& t, const DLamination& l);
// X-exponent vector of the pairing, summed over components with weights.
std::vector<HalfInt> pairing_h(const Triangulation& t, const DLamination& l);
IntegralityReport integrality(const Triangulation& t, const DLamination& l);

}  // namespace dbl
