#include "bft/cells.hpp"

#include <sstream>

namespace bft::cells {

StableComplex::StableComplex(std::vector<Cell> c) : cells(std::move(c)) {
    if (cells.empty() || cells.size() > 3)
        throw Error("StableComplex: 1 to 3 cells supported");
    for (std::size_t i = 1; i < cells.size(); ++i)
        if (cells[i].dimension <= cells[i - 1].dimension)
            throw Error("StableComplex: cell dimensions must strictly increase");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto& att = cells[i].attaching;
        std::erase_if(att, [](const AttachComponent& a) { return a.element.is_zero(); });
        for (const auto& a : att) {
            if (a.target_cell >= i) throw Error("StableComplex: attaching must hit an earlier cell");
            Int expect = cells[i].dimension - 1 - cells[a.target_cell].dimension;
            if (a.element.degree != expect)
                throw Error("StableComplex: attaching degree mismatch");
        }
    }
}

StemElement StableComplex::attach(std::size_t from, std::size_t onto) const {
    Int deg = cells[from].dimension - 1 - cells[onto].dimension;
    for (const auto& a : cells[from].attaching)
        if (a.target_cell == onto) return a.element;
    return StemElement::zero(deg);
}

std::string StableComplex::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i == 0) {
            os << "S" << cells[i].dimension;
            continue;
        }
        os << " u_{";
        bool first = true;
        for (const auto& a : cells[i].attaching) {
            if (!first) os << "+";
            os << a.element.to_string() << "@" << cells[a.target_cell].dimension;
            first = false;
        }
        if (first) os << "0";
        os << "} e" << cells[i].dimension;
    }
    return os.str();
}

StableComplex cp_stunted(Int n, Int k) {
    if (k < 1 || k > 3) throw OutOfRange("cp_stunted: k must be 1, 2 or 3");
    if ((k == 1 && n < 1) || (k == 2 && n < 3) || (k == 3 && n < 4))
        throw OutOfRange("cp_stunted: n too small for k = " + std::to_string(k));
    if (k == 1) return StableComplex(std::vector<Cell>{{2 * n, {}}});
    if (k == 2)
        return StableComplex(std::vector<Cell>{{2 * n - 2, {}},
                              {2 * n, {{0, StemElement::eta(n - 1)}}}});
    return StableComplex(std::vector<Cell>{{2 * n - 4, {}},
                          {2 * n - 2, {{0, StemElement::eta(n - 2)}}},
                          {2 * n,
                           {{1, StemElement::eta(n - 1)},
                            {0, StemElement::nu(n % 2 ? (n + 1) / 2 : (n - 2) / 2)}}}});
}

StableComplex hp_q_stunted(Int n, Quaternionic which) {
    if (n < 3) throw OutOfRange("hp_q_stunted: n must be >= 3");
    if (which == Quaternionic::HP)
        return StableComplex(std::vector<Cell>{{4 * n - 4, {}},
                              {4 * n, {{0, StemElement::nu(n - 1)}}}});
    return StableComplex(std::vector<Cell>{{4 * n - 5, {}},
                          {4 * n - 1, {{0, StemElement::nu(n)}}}});
}

}  // namespace bft::cells
