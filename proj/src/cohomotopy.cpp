#include "bft/cohomotopy.hpp"

#include <numeric>
#include <sstream>

namespace bft::cohomotopy {

using cells::StemElement;
using stems::stem_group;
using stems::stem_order;

namespace {

FgAbGroup stems_at(Int d) {
    if (d < 0) return FgAbGroup::trivial();
    if (d > 5)
        throw StemRangeExceeded("stem group in degree " + std::to_string(d) + " is unknown");
    return stem_group(d);
}

Int order_at(Int d) {
    if (d < 0) return 1;
    if (d > 5)
        throw StemRangeExceeded("stem group in degree " + std::to_string(d) + " is unknown");
    return stem_order(d);
}

/// Map between direct sums of stem groups, x -> (x o e_1, x o e_2, ...).
/// Trivial factors are dropped; surviving factors keep their listed order.
struct LesMap {
    IntMatrix matrix;
    std::vector<Int> src_orders, tgt_orders;
};

LesMap build_map(const std::vector<Int>& src_degs, const std::vector<Int>& tgt_degs,
                 const std::vector<std::vector<StemElement>>& comp) {
    LesMap m;
    std::vector<std::size_t> src_live, tgt_live;
    for (std::size_t i = 0; i < src_degs.size(); ++i)
        if (order_at(src_degs[i]) != 1) {
            src_live.push_back(i);
            m.src_orders.push_back(order_at(src_degs[i]));
        }
    for (std::size_t j = 0; j < tgt_degs.size(); ++j)
        if (order_at(tgt_degs[j]) != 1) {
            tgt_live.push_back(j);
            m.tgt_orders.push_back(order_at(tgt_degs[j]));
        }
    m.matrix = IntMatrix::Zero(static_cast<Eigen::Index>(tgt_live.size()),
                               static_cast<Eigen::Index>(src_live.size()));
    for (std::size_t c = 0; c < src_live.size(); ++c)
        for (std::size_t r = 0; r < tgt_live.size(); ++r) {
            const StemElement& e = comp[src_live[c]][tgt_live[r]];
            if (src_degs[src_live[c]] + e.degree != tgt_degs[tgt_live[r]]) continue;
            StemElement img = stems::compose(StemElement(src_degs[src_live[c]], 1), e);
            m.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = img.coeff;
        }
    return m;
}

std::string describe(const FgAbGroup& g) { return g.to_string(); }

CohomotopyResult splice(const FgAbGroup& sub, const FgAbGroup& quot,
                        std::vector<std::string> derivation) {
    abelian::ExtensionResult ext = abelian::classify_extension(sub, quot);
    CohomotopyResult res;
    res.derivation = std::move(derivation);
    std::ostringstream os;
    os << "extension 0 -> " << describe(sub) << " -> pi -> " << describe(quot) << " -> 0";
    if (ext.ambiguous) {
        res.ambiguous = true;
        res.candidates = ext.candidates;
        os << " : ambiguous";
    } else {
        res.group = ext.group;
        os << " = " << describe(ext.group);
    }
    res.derivation.push_back(os.str());
    return res;
}

}  // namespace

CohomotopyResult complex_cohomotopy(const StableComplex& x, Int m) {
    const auto& cells = x.cells;
    std::vector<std::string> log;
    log.push_back("complex " + x.to_string() + ", degree " + std::to_string(m));

    if (cells.size() == 1) {
        CohomotopyResult res;
        res.group = stems_at(cells[0].dimension - m);
        log.push_back("sphere: stem in degree " + std::to_string(cells[0].dimension - m) +
                      " = " + describe(res.group));
        res.derivation = std::move(log);
        return res;
    }

    if (cells.size() == 2) {
        const Int j0 = cells[0].dimension, d = cells[1].dimension;
        StemElement alpha = x.attach(1, 0);
        LesMap top = build_map({j0 - m + 1}, {d - m}, {{alpha}});
        LesMap bot = build_map({j0 - m}, {d - m - 1}, {{alpha}});
        FgAbGroup sub = abelian::cokernel_of(top.matrix, top.src_orders, top.tgt_orders);
        FgAbGroup quot = abelian::kernel_of(bot.matrix, bot.src_orders, bot.tgt_orders);
        log.push_back("cofiber sequence of the bottom sphere; attaching " + alpha.to_string());
        log.push_back("sub = coker(attach in stems degree " + std::to_string(j0 - m + 1) +
                      ") = " + describe(sub));
        log.push_back("quot = ker(attach in stems degree " + std::to_string(j0 - m) + ") = " +
                      describe(quot));
        return splice(sub, quot, std::move(log));
    }

    const Int j0 = cells[0].dimension, j1 = cells[1].dimension, d = cells[2].dimension;
    StemElement alpha = x.attach(1, 0);  // middle onto bottom
    StemElement beta = x.attach(2, 1);   // top onto middle
    StemElement gamma = x.attach(2, 0);  // top onto bottom

    if (!alpha.is_zero() && !beta.is_zero())
        throw Unsupported(
            "3-cell complex with nonzero attaching onto both lower cells: the exact "
            "sequence alone does not determine the group");

    if (alpha.is_zero()) {
        // wedge skeleton S^{j0} v S^{j1}; collapse it
        log.push_back("skeleton is a wedge; top attaching (" + gamma.to_string() + ", " +
                      beta.to_string() + ")");
        LesMap top = build_map({j0 - m + 1, j1 - m + 1}, {d - m}, {{gamma}, {beta}});
        LesMap bot = build_map({j0 - m, j1 - m}, {d - m - 1}, {{gamma}, {beta}});
        FgAbGroup sub = abelian::cokernel_of(top.matrix, top.src_orders, top.tgt_orders);
        FgAbGroup quot = abelian::kernel_of(bot.matrix, bot.src_orders, bot.tgt_orders);
        log.push_back("sub = coker = " + describe(sub) + ", quot = ker = " + describe(quot));
        return splice(sub, quot, std::move(log));
    }

    // beta = 0: collapsing the bottom sphere leaves S^{j1} v S^{d}
    log.push_back("top cell misses the middle cell; collapse the bottom sphere, connecting (" +
                  alpha.to_string() + ", " + gamma.to_string() + ")");
    LesMap top = build_map({j0 - m + 1}, {j1 - m, d - m}, {{alpha, gamma}});
    LesMap bot = build_map({j0 - m}, {j1 - m - 1, d - m - 1}, {{alpha, gamma}});
    FgAbGroup sub = abelian::cokernel_of(top.matrix, top.src_orders, top.tgt_orders);
    FgAbGroup quot = abelian::kernel_of(bot.matrix, bot.src_orders, bot.tgt_orders);
    log.push_back("sub = coker = " + describe(sub) + ", quot = ker = " + describe(quot));
    return splice(sub, quot, std::move(log));
}

namespace {

Int gcd24(Int v) { return std::gcd<Int, Int>(24, v); }

void check_range(Int n, Int j) {
    if (j < 0 || j > 6) throw OutOfRange("hurewicz_table: j must be in 0..6");
    Int min_n = j <= 2 ? j : 4;
    if (n < min_n)
        throw OutOfRange("hurewicz_table: n = " + std::to_string(n) + " below validity for j = " +
                         std::to_string(j));
}

}  // namespace

HurewiczData hurewicz_table(Int n, Int j) {
    check_range(n, j);
    using G = FgAbGroup;
    switch (j) {
        case 0: return {G::trivial(), G::trivial()};
        case 1: return {G::cyclic(std::gcd<Int, Int>(2, n + 1)), G::trivial()};
        case 2: return {G::cyclic(std::gcd<Int, Int>(2, n - 1)), G::cyclic(std::gcd<Int, Int>(2, n))};
        case 3:
            return {n % 2 ? G::cyclic(gcd24(n + 1)) : G::cyclic(gcd24(n - 2) / 2), G::trivial()};
        case 4:
            return {G::trivial(), n % 2 ? G::cyclic(48 / gcd24(n + 1)) : G::cyclic(24 / gcd24(n - 2))};
        case 5:
            return {n % 2 ? G::cyclic(gcd24(n - 3) / 2) : G::cyclic(gcd24(n)), G::trivial()};
        default:
            return {G::trivial(), n % 2 ? G::cyclic(24 / gcd24(n - 3)) : G::cyclic(48 / gcd24(n))};
    }
}

FgAbGroup cp_cohomotopy(Int n, Int j) {
    HurewiczData h = hurewicz_table(n, j);
    if (j % 2) return h.kernel;
    return abelian::direct_sum(FgAbGroup::free_group(1), h.kernel);
}

GroupHom restriction_map(Int n, Int j, Int s) {
    if (s < 0) throw OutOfRange("restriction_map: s must be >= 0");
    FgAbGroup src = cp_cohomotopy(n, j);
    if (s == 0) return GroupHom::identity(src);
    if (j - 2 * s < 0) return GroupHom::zero(src, FgAbGroup::trivial());

    FgAbGroup tgt = cp_cohomotopy(n - s, j - 2 * s);
    if (j == 3 && s == 1) return GroupHom::zero(src, tgt);
    if (j == 5 && s == 2) return GroupHom::zero(src, tgt);
    if ((j == 5 || j == 6) && s == 1) {
        if (!(src == tgt)) throw Error("restriction_map: expected isomorphic groups");
        return GroupHom(src, tgt, IntMatrix::Identity(src.rank(), src.rank()));
    }
    if (j == 2 && s == 1) {
        // torsion dies in the free target; Hurewicz naturality fixes the
        // free coefficient as gcd(2, n)
        IntMatrix m = IntMatrix::Zero(1, src.rank());
        m(0, 0) = std::gcd<Int, Int>(2, n);
        return GroupHom(src, tgt, m);
    }
    if (j == 6 && s == 2) {
        IntMatrix m = IntMatrix::Zero(tgt.rank(), 1);
        m(0, 0) = n % 2 ? 24 / gcd24(n - 3) : 24 / gcd24(n);
        return GroupHom(src, tgt, m);
    }
    throw Unsupported("restriction_map: (j, s) = (" + std::to_string(j) + ", " +
                      std::to_string(s) + ") is not determined");
}

}  // namespace bft::cohomotopy
