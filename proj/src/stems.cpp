#include "bft/stems.hpp"

#include <sstream>

namespace bft::stems {

FgAbGroup stem_group(Int d) {
    if (d < -5 || d > 5) throw OutOfRange("stem_group: degree " + std::to_string(d) + " outside -5..5");
    switch (d) {
        case 0: return FgAbGroup::free_group(1);
        case 1:
        case 2: return FgAbGroup::cyclic(2);
        case 3: return FgAbGroup::cyclic(24);
        default: return FgAbGroup::trivial();
    }
}

Int stem_order(Int d) {
    switch (d) {
        case 0: return 0;
        case 1:
        case 2: return 2;
        case 3: return 24;
        default:
            if (d < -5 || d > 5)
                throw OutOfRange("stem_order: degree " + std::to_string(d) + " outside -5..5");
            return 1;
    }
}

StemElement::StemElement(Int deg, Int c) : degree(deg) {
    if (deg < 0 || deg > 5) throw OutOfRange("StemElement: degree " + std::to_string(deg) + " outside 0..5");
    Int o = stem_order(deg);
    coeff = o == 0 ? c : ((c % o) + o) % o;
}

std::string StemElement::to_string() const {
    static const char* gen[] = {"iota", "eta", "eta^2", "nu"};
    if (degree > 3 || coeff == 0) return "0_" + std::to_string(degree);
    std::ostringstream os;
    if (coeff != 1) os << coeff;
    os << gen[degree];
    return os.str();
}

StemElement compose(const StemElement& a, const StemElement& b) {
    Int d = a.degree + b.degree;
    if (d > 5) throw OutOfRange("stem compose: product degree " + std::to_string(d) + " exceeds 5");
    Int c = a.coeff * b.coeff;
    if (a.degree == 0 || b.degree == 0) return StemElement(d, c);
    // both factors of positive degree
    if (a.degree == 1 && b.degree == 1) return StemElement(2, c);           // eta.eta
    if (d == 3) return StemElement(3, 12 * c);                              // eta.eta^2 = 12nu
    return StemElement(d, 0);  // anything hitting eta.nu, or degrees 4, 5
}

StemElement add(const StemElement& a, const StemElement& b) {
    if (a.degree != b.degree) throw Error("stem add: degree mismatch");
    return StemElement(a.degree, a.coeff + b.coeff);
}

GroupHom precomposition_map(const StemElement& alpha, Int m) {
    Int md = m + alpha.degree;
    FgAbGroup src = stem_group(m);
    FgAbGroup tgt = stem_group(md);
    if (src.is_trivial() || tgt.is_trivial()) return GroupHom::zero(src, tgt);
    StemElement gen(m, 1);
    StemElement img = compose(gen, alpha);
    IntMatrix mat(1, 1);
    mat(0, 0) = img.coeff;
    return GroupHom(src, tgt, mat);
}

}  // namespace bft::stems
