#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "bft/errors.hpp"

namespace bft {

using Int = std::int64_t;
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

namespace abelian {

/// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ..., di >= 0.
struct SmithForm {
    IntMatrix left;   // U, rows x rows
    IntMatrix diag;   // D, same shape as A
    IntMatrix right;  // V, cols x cols
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Rank of an integer matrix (over Q).
Eigen::Index integer_rank(const IntMatrix& a);

/// Basis of the integer nullspace {x : A x = 0}, as matrix columns.
IntMatrix integer_nullspace(const IntMatrix& a);

/// Finitely generated abelian group in invariant-factor normal form:
/// Z^free_rank + Z/d1 + ... + Z/dt with d1 | d2 | ... and each di >= 2.
/// Canonical: two values are isomorphic iff structurally equal.
struct FgAbGroup {
    Int free_rank = 0;
    std::vector<Int> torsion;

    static FgAbGroup trivial() { return {}; }
    static FgAbGroup free_group(Int rank);
    static FgAbGroup cyclic(Int n);  // n == 0 -> Z, n == 1 -> trivial
    /// Canonicalize an arbitrary list of cyclic orders (0 = infinite).
    static FgAbGroup from_orders(const std::vector<Int>& orders);

    /// Number of generators in the canonical basis (free first, then torsion).
    Int rank() const { return free_rank + static_cast<Int>(torsion.size()); }
    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
    bool is_free() const { return torsion.empty(); }
    /// Order of the torsion subgroup.
    Int torsion_order() const;
    /// Total order; 0 means infinite.
    Int order() const { return free_rank > 0 ? 0 : torsion_order(); }
    /// Order of generator i (0 = infinite).
    Int generator_order(Int i) const;

    bool operator==(const FgAbGroup&) const = default;
    bool operator<(const FgAbGroup& o) const;

    std::string to_string() const;  // e.g. "Z^2 + Z/2 + Z/24", trivial -> "0"
};

FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b);

/// Homomorphism between canonical groups. Columns of `matrix` are the images
/// of the source generators; entries on torsion target rows are stored
/// reduced. Construction validates well-definedness on torsion generators.
struct GroupHom {
    FgAbGroup source;
    FgAbGroup target;
    IntMatrix matrix;  // target.rank() x source.rank()

    GroupHom() = default;
    GroupHom(FgAbGroup src, FgAbGroup tgt, IntMatrix m);

    static GroupHom zero(FgAbGroup src, FgAbGroup tgt);
    static GroupHom identity(const FgAbGroup& g);
};

GroupHom compose(const GroupHom& g, const GroupHom& f);  // g after f
GroupHom add(const GroupHom& f, const GroupHom& g);

FgAbGroup cokernel(const GroupHom& f);
FgAbGroup kernel(const GroupHom& f);

/// Kernel/cokernel of a map between direct sums of cyclic groups given by raw
/// presentation data (orders: 0 = infinite factor). Used where intermediate
/// groups are assembled generator-by-generator and must not be reordered by
/// canonicalization.
FgAbGroup cokernel_of(const IntMatrix& matrix, const std::vector<Int>& src_orders,
                      const std::vector<Int>& tgt_orders);
FgAbGroup kernel_of(const IntMatrix& matrix, const std::vector<Int>& src_orders,
                    const std::vector<Int>& tgt_orders);

/// Middle group of an extension 0 -> sub -> G -> quot -> 0. Unique when the
/// extension is forced (either side trivial, or quot free); otherwise all
/// candidate middle groups are listed and `ambiguous` is set.
struct ExtensionResult {
    bool ambiguous = false;
    FgAbGroup group;                      // valid when !ambiguous
    std::vector<FgAbGroup> candidates;    // sorted, valid when ambiguous
};

ExtensionResult classify_extension(const FgAbGroup& sub, const FgAbGroup& quot);

}  // namespace abelian
}  // namespace bft
