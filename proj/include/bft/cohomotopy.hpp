#pragma once

#include <string>
#include <vector>

#include "bft/cells.hpp"

namespace bft::cohomotopy {

using abelian::ExtensionResult;
using abelian::FgAbGroup;
using abelian::GroupHom;
using cells::StableComplex;

/// Result of a cohomotopy computation. If any spliced extension was
/// ambiguous, `ambiguous` is set and `candidates` lists the possibilities;
/// ambiguity is surfaced, never resolved silently.
struct CohomotopyResult {
    bool ambiguous = false;
    FgAbGroup group;
    std::vector<FgAbGroup> candidates;
    std::vector<std::string> derivation;  // audit trail of the LES steps
};

/// pi^m(X) for a stable complex with <= 3 cells, via the cofiber long exact
/// sequence. Throws StemRangeExceeded when a needed stem group lies beyond
/// degree 5 and is not forced to vanish, Unsupported when both attaching
/// maps of a 3-cell complex are nonzero (the sequence alone cannot decide).
CohomotopyResult complex_cohomotopy(const StableComplex& x, Int m);

/// Kernel and cokernel of the degree-(2n-j) Hurewicz map on CP^n.
struct HurewiczData {
    FgAbGroup kernel;
    FgAbGroup cokernel;

    bool operator==(const HurewiczData&) const = default;
};

/// Closed forms for j in 0..6. Validity: j=0: n>=1; j=1: n>=2; j=2: n>=3;
/// j=3: n>=4; j in 4..6: n>=5.
HurewiczData hurewicz_table(Int n, Int j);

/// pi^{2n-j}(CP^n): the Hurewicz kernel for j odd, Z (+) kernel for j even.
FgAbGroup cp_cohomotopy(Int n, Int j);

/// The map pi^{2n-j}(CP^n) -> pi^{2n-j}(CP^{n-s}) induced by inclusion.
/// Supported: s=0 (identity); j-2s<0 (zero to the trivial group); (j,s) in
/// {(2,1),(3,1),(5,1),(6,1),(5,2),(6,2)}. Everything else is Unsupported.
GroupHom restriction_map(Int n, Int j, Int s);

}  // namespace bft::cohomotopy
