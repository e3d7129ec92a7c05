#pragma once

#include "double/pairing.hpp"

#include <vector>

namespace dbl {

// max over num of <e,u> minus max over den of <e,u>. Coefficients are dropped,
// which is only meaningful for subtraction-free expressions.
struct TropicalFunction {
    std::vector<Exponent> num, den;
    Rational eval(const std::vector<Rational>& u) const;
    TropicalFunction operator+(const TropicalFunction& o) const;
};

TropicalFunction tropicalize(const RationalExpr& f);
TropicalFunction tropicalize(const PairingValue& p);

// Evaluates the tropicalized pairing of l at the point m, component by component;
// each reversed puncture met by an intersecting curve contributes trop(kappa).
Rational intersection_pairing(const Triangulation& t, const DLamination& l, const DLamCoords& m);

// Positive rescaling with largest absolute coordinate 1.
std::vector<Rational> sphere_normalize(const std::vector<Rational>& v);

}  // namespace dbl
