#pragma once

#include <string>
#include <vector>

#include "bft/stems.hpp"

namespace bft::cells {

using stems::StemElement;

/// One component of an attaching map: the stem element carried onto an
/// earlier cell (index into StableComplex::cells).
struct AttachComponent {
    std::size_t target_cell = 0;
    StemElement element;

    bool operator==(const AttachComponent&) const = default;
};

/// One cell of a stable complex. Attaching components with zero stem element
/// are dropped on construction, so wedges compare equal to zero-attached data.
struct Cell {
    Int dimension = 0;
    std::vector<AttachComponent> attaching;  // empty for the bottom cell(s)

    bool operator==(const Cell&) const = default;
};

/// Stable CW complex with at most 3 cells, dimensions strictly increasing.
struct StableComplex {
    std::vector<Cell> cells;

    explicit StableComplex(std::vector<Cell> c);

    bool operator==(const StableComplex&) const = default;

    /// Attaching component of cell `from` onto cell `onto`, zero if absent.
    StemElement attach(std::size_t from, std::size_t onto) const;

    std::string to_string() const;  // "S10 u_eta e12 u_4nu e14"
};

/// Stunted complex projective space CP^n / CP^{n-k}, as a k-cell stable
/// complex (k <= 3). Bottom cell S^{2(n-k+1)}.
StableComplex cp_stunted(Int n, Int k);

enum class Quaternionic { HP, Q };

/// HP^n_{n-2} = S^{4n-4} u_{(n-1)nu} e^{4n};
/// Q^n_{n-2}  = S^{4n-5} u_{n nu} e^{4n-1}.
StableComplex hp_q_stunted(Int n, Quaternionic which);

}  // namespace bft::cells
