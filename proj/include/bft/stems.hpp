#pragma once

#include <string>

#include "bft/abelian.hpp"

namespace bft::stems {

using abelian::FgAbGroup;
using abelian::GroupHom;

/// pi^S_d for -5 <= d <= 5: Z, Z/2, Z/2, Z/24 in degrees 0..3, trivial
/// elsewhere in range. Beyond |d| = 5 the table ends.
FgAbGroup stem_group(Int d);

/// Order of the generator of pi^S_d (0 for degree 0, 1 for trivial groups).
Int stem_order(Int d);

/// Element of a stable stem, as a multiple of the degree's generator
/// (iota, eta, eta^2, nu). Coefficient stored reduced mod the group order.
struct StemElement {
    Int degree = 0;
    Int coeff = 0;

    StemElement() = default;
    StemElement(Int degree, Int coeff);

    bool is_zero() const { return coeff == 0; }
    bool operator==(const StemElement&) const = default;

    std::string to_string() const;  // "3eta", "12nu", "0_4", ...

    static StemElement zero(Int degree) { return StemElement(degree, 0); }
    static StemElement iota(Int k = 1) { return StemElement(0, k); }
    static StemElement eta(Int k = 1) { return StemElement(1, k); }
    static StemElement eta_sq(Int k = 1) { return StemElement(2, k); }
    static StemElement nu(Int k = 1) { return StemElement(3, k); }
};

/// Composition product in the stable stems. eta*eta = eta^2, eta*eta^2 = 12nu,
/// eta*nu = 0; products into degrees 4, 5 vanish.
StemElement compose(const StemElement& a, const StemElement& b);

StemElement add(const StemElement& a, const StemElement& b);

/// Homomorphism pi^S_m -> pi^S_{m+alpha.degree} given by x -> x o alpha.
GroupHom precomposition_map(const StemElement& alpha, Int m);

}  // namespace bft::stems
