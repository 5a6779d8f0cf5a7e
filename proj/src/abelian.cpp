#include "bft/abelian.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace bft::abelian {

namespace {

void swap_rows(IntMatrix& m, Eigen::Index i, Eigen::Index j) { m.row(i).swap(m.row(j)); }
void swap_cols(IntMatrix& m, Eigen::Index i, Eigen::Index j) { m.col(i).swap(m.col(j)); }

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
    const Eigen::Index rows = a.rows(), cols = a.cols();
    SmithForm s;
    s.left = IntMatrix::Identity(rows, rows);
    s.right = IntMatrix::Identity(cols, cols);
    s.diag = a;
    IntMatrix& d = s.diag;

    Eigen::Index t = 0;
    while (t < rows && t < cols) {
        // find a pivot of minimal absolute value in the remaining block
        Eigen::Index pr = -1, pc = -1;
        Int best = 0;
        for (Eigen::Index i = t; i < rows; ++i)
            for (Eigen::Index j = t; j < cols; ++j) {
                Int v = std::abs(d(i, j));
                if (v != 0 && (best == 0 || v < best)) {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        if (pr < 0) break;  // remaining block is zero
        if (pr != t) {
            swap_rows(d, pr, t);
            swap_rows(s.left, pr, t);
        }
        if (pc != t) {
            swap_cols(d, pc, t);
            swap_cols(s.right, pc, t);
        }

        bool clean = true;
        for (Eigen::Index i = t + 1; i < rows; ++i) {
            if (d(i, t) != 0) {
                Int q = d(i, t) / d(t, t);
                d.row(i) -= q * d.row(t);
                s.left.row(i) -= q * s.left.row(t);
                if (d(i, t) != 0) clean = false;
            }
        }
        for (Eigen::Index j = t + 1; j < cols; ++j) {
            if (d(t, j) != 0) {
                Int q = d(t, j) / d(t, t);
                d.col(j) -= q * d.col(t);
                s.right.col(j) -= q * s.right.col(t);
                if (d(t, j) != 0) clean = false;
            }
        }
        if (!clean) continue;  // pivot shrank; redo this position

        // pivot must divide every remaining entry
        bool divides = true;
        for (Eigen::Index i = t + 1; i < rows && divides; ++i)
            for (Eigen::Index j = t + 1; j < cols && divides; ++j)
                if (d(i, j) % d(t, t) != 0) {
                    d.row(t) += d.row(i);
                    s.left.row(t) += s.left.row(i);
                    divides = false;
                }
        if (!divides) continue;

        if (d(t, t) < 0) {
            d.row(t) = -d.row(t);
            s.left.row(t) = -s.left.row(t);
        }
        ++t;
    }
    return s;
}

Eigen::Index integer_rank(const IntMatrix& a) {
    SmithForm s = smith_normal_form(a);
    Eigen::Index r = 0;
    const Eigen::Index n = std::min(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        if (s.diag(i, i) != 0) ++r;
    return r;
}

IntMatrix integer_nullspace(const IntMatrix& a) {
    if (a.cols() == 0) return IntMatrix(a.cols(), 0);
    if (a.rows() == 0) return IntMatrix::Identity(a.cols(), a.cols());
    SmithForm s = smith_normal_form(a);
    Eigen::Index r = 0;
    const Eigen::Index n = std::min(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        if (s.diag(i, i) != 0) ++r;
    return s.right.rightCols(a.cols() - r);
}

FgAbGroup FgAbGroup::free_group(Int rank) {
    FgAbGroup g;
    g.free_rank = rank;
    return g;
}

FgAbGroup FgAbGroup::cyclic(Int n) {
    FgAbGroup g;
    if (n == 0)
        g.free_rank = 1;
    else if (std::abs(n) > 1)
        g.torsion.push_back(std::abs(n));
    return g;
}

FgAbGroup FgAbGroup::from_orders(const std::vector<Int>& orders) {
    FgAbGroup g;
    std::vector<Int> tor;
    for (Int d : orders) {
        if (d == 0)
            ++g.free_rank;
        else if (std::abs(d) > 1)
            tor.push_back(std::abs(d));
    }
    // pairwise gcd/lcm passes until the divisibility chain holds
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < tor.size(); ++i)
            for (std::size_t j = i + 1; j < tor.size(); ++j) {
                Int g1 = std::gcd(tor[i], tor[j]);
                Int l1 = tor[i] / g1 * tor[j];
                if (g1 != tor[i] || l1 != tor[j]) {
                    tor[i] = g1;
                    tor[j] = l1;
                    changed = true;
                }
            }
    }
    std::erase(tor, 1);
    std::sort(tor.begin(), tor.end());
    g.torsion = std::move(tor);
    return g;
}

Int FgAbGroup::torsion_order() const {
    Int o = 1;
    for (Int d : torsion) o *= d;
    return o;
}

Int FgAbGroup::generator_order(Int i) const {
    return i < free_rank ? 0 : torsion[static_cast<std::size_t>(i - free_rank)];
}

bool FgAbGroup::operator<(const FgAbGroup& o) const {
    if (free_rank != o.free_rank) return free_rank < o.free_rank;
    return torsion < o.torsion;
}

std::string FgAbGroup::to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank == 1) {
        os << "Z";
        first = false;
    } else if (free_rank > 1) {
        os << "Z^" << free_rank;
        first = false;
    }
    for (Int d : torsion) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    return os.str();
}

FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
    std::vector<Int> orders;
    orders.insert(orders.end(), a.torsion.begin(), a.torsion.end());
    orders.insert(orders.end(), b.torsion.begin(), b.torsion.end());
    FgAbGroup g = FgAbGroup::from_orders(orders);
    g.free_rank = a.free_rank + b.free_rank;
    return g;
}

namespace {

Int mod_reduce(Int v, Int order) {
    if (order == 0) return v;
    Int r = v % order;
    return r < 0 ? r + order : r;
}

/// Relation matrix of a group presentation: column i is d_i * e_{free+i}.
IntMatrix relation_matrix(const std::vector<Int>& orders) {
    Eigen::Index rank = static_cast<Eigen::Index>(orders.size());
    std::vector<Eigen::Index> finite;
    for (Eigen::Index i = 0; i < rank; ++i)
        if (orders[static_cast<std::size_t>(i)] != 0) finite.push_back(i);
    IntMatrix r = IntMatrix::Zero(rank, static_cast<Eigen::Index>(finite.size()));
    for (std::size_t j = 0; j < finite.size(); ++j)
        r(finite[j], static_cast<Eigen::Index>(j)) = orders[static_cast<std::size_t>(finite[j])];
    return r;
}

std::vector<Int> group_orders(const FgAbGroup& g) {
    std::vector<Int> o(static_cast<std::size_t>(g.rank()));
    for (Int i = 0; i < g.rank(); ++i) o[static_cast<std::size_t>(i)] = g.generator_order(i);
    return o;
}

/// Group presented as Z^rank / columns(rel).
FgAbGroup group_of_presentation(Eigen::Index rank, const IntMatrix& rel) {
    SmithForm s = smith_normal_form(rel);
    std::vector<Int> orders;
    Eigen::Index r = 0;
    const Eigen::Index n = std::min(rel.rows(), rel.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        if (s.diag(i, i) != 0) {
            orders.push_back(s.diag(i, i));
            ++r;
        }
    FgAbGroup g = FgAbGroup::from_orders(orders);
    g.free_rank = rank - r;
    return g;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m(a.rows(), a.cols() + b.cols());
    m << a, b;
    return m;
}

}  // namespace

GroupHom::GroupHom(FgAbGroup src, FgAbGroup tgt, IntMatrix m)
    : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
    if (matrix.rows() != target.rank() || matrix.cols() != source.rank())
        throw Error("GroupHom: matrix shape does not match source/target ranks");
    // reduce torsion target rows
    for (Int i = target.free_rank; i < target.rank(); ++i) {
        Int o = target.generator_order(i);
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) matrix(i, j) = mod_reduce(matrix(i, j), o);
    }
    // well-definedness on torsion source generators: d_j * column_j must
    // vanish in the target
    for (Int j = source.free_rank; j < source.rank(); ++j) {
        Int dj = source.generator_order(j);
        for (Int i = 0; i < target.rank(); ++i) {
            Int o = target.generator_order(i);
            Int v = dj * matrix(i, j);
            if (o == 0 ? v != 0 : v % o != 0)
                throw Error("GroupHom: image of torsion generator has wrong order");
        }
    }
}

GroupHom GroupHom::zero(FgAbGroup src, FgAbGroup tgt) {
    IntMatrix m = IntMatrix::Zero(tgt.rank(), src.rank());
    return GroupHom(std::move(src), std::move(tgt), std::move(m));
}

GroupHom GroupHom::identity(const FgAbGroup& g) {
    return GroupHom(g, g, IntMatrix::Identity(g.rank(), g.rank()));
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
    if (!(f.target == g.source)) throw Error("compose: source/target mismatch");
    return GroupHom(f.source, g.target, g.matrix * f.matrix);
}

GroupHom add(const GroupHom& f, const GroupHom& g) {
    if (!(f.source == g.source) || !(f.target == g.target))
        throw Error("add: source/target mismatch");
    return GroupHom(f.source, f.target, f.matrix + g.matrix);
}

FgAbGroup cokernel_of(const IntMatrix& matrix, const std::vector<Int>& src_orders,
                      const std::vector<Int>& tgt_orders) {
    (void)src_orders;
    IntMatrix rel = hstack(matrix, relation_matrix(tgt_orders));
    return group_of_presentation(matrix.rows(), rel);
}

FgAbGroup kernel_of(const IntMatrix& matrix, const std::vector<Int>& src_orders,
                    const std::vector<Int>& tgt_orders) {
    const Eigen::Index a = matrix.cols();
    IntMatrix rel_t = relation_matrix(tgt_orders);
    // x-parts of the nullspace of [M | R_T] span {x : M x lies in im R_T}
    IntMatrix n = integer_nullspace(hstack(matrix, rel_t));
    IntMatrix lat = n.topRows(a);

    // basis of the lattice spanned by the columns of lat
    SmithForm s = smith_normal_form(lat);
    Eigen::Index r = 0;
    const Eigen::Index mn = std::min(lat.rows(), lat.cols());
    for (Eigen::Index i = 0; i < mn; ++i)
        if (s.diag(i, i) != 0) ++r;
    // basis vectors b_i = d_i * (U^-1 e_i); coordinates of v are (U v)_i / d_i
    IntMatrix rel_s = relation_matrix(src_orders);
    IntMatrix coords(r, rel_s.cols());
    for (Eigen::Index j = 0; j < rel_s.cols(); ++j) {
        IntVector w = s.left * rel_s.col(j);
        for (Eigen::Index i = 0; i < r; ++i) {
            if (w(i) % s.diag(i, i) != 0)
                throw Error("kernel_of: source relations do not lie in the kernel lattice");
            coords(i, j) = w(i) / s.diag(i, i);
        }
        for (Eigen::Index i = r; i < w.size(); ++i)
            if (w(i) != 0) throw Error("kernel_of: source relations do not lie in the kernel lattice");
    }
    return group_of_presentation(r, coords);
}

FgAbGroup cokernel(const GroupHom& f) {
    return cokernel_of(f.matrix, group_orders(f.source), group_orders(f.target));
}

FgAbGroup kernel(const GroupHom& f) {
    return kernel_of(f.matrix, group_orders(f.source), group_orders(f.target));
}

namespace {

/// All abelian groups with torsion of order n (free rank 0), by invariant factors.
void torsion_groups_of_order(Int n, std::vector<FgAbGroup>& out) {
    // factor sequences d1 | d2 | ... | dt with product n
    std::vector<Int> cur;
    auto rec = [&](auto&& self, Int rem, Int min_d) -> void {
        if (rem == 1) {
            // chain condition means factors must be emitted largest-last;
            // build from the largest factor downward instead: collected in cur
            FgAbGroup g;
            g.torsion = cur;
            out.push_back(g);
            return;
        }
        for (Int d = min_d; d <= rem; ++d) {
            if (rem % d != 0) continue;
            // remaining product must be a multiple chain over d
            cur.push_back(d);
            // every later factor must be divisible by d
            Int rest = rem / d;
            // quick prune: rest must be expressible with factors divisible by d
            if (rest == 1 || rest % d == 0 || true) self(self, rest, d);
            cur.pop_back();
        }
    };
    // enumerate nondecreasing factor sequences, then filter divisibility chain
    std::vector<FgAbGroup> raw;
    std::swap(out, raw);
    rec(rec, n, 2);
    std::vector<FgAbGroup> filtered;
    for (auto& g : out) {
        bool chain = true;
        for (std::size_t i = 0; i + 1 < g.torsion.size(); ++i)
            if (g.torsion[i + 1] % g.torsion[i] != 0) chain = false;
        if (chain) filtered.push_back(g);
    }
    out = std::move(filtered);
    out.insert(out.end(), raw.begin(), raw.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

/// Does there exist an exact sequence 0 -> sub -> g -> quot -> 0, with quot
/// finite? Brute force over homomorphisms g -> quot given by generator images.
bool realizes_extension(const FgAbGroup& g, const FgAbGroup& sub, const FgAbGroup& quot) {
    const Int gens = g.rank();
    const Int qn = quot.torsion_order();
    if (quot.free_rank != 0) throw Error("realizes_extension: quot must be finite");
    // generator images enumerated as tuples in quot
    const Int qrank = quot.rank();
    std::vector<Int> idx(static_cast<std::size_t>(gens), 0);
    Int total = 1;
    for (Int i = 0; i < gens; ++i) {
        total *= qn;
        if (total > 2000000) throw Error("classify_extension: enumeration too large");
    }
    std::vector<Int> qorders(static_cast<std::size_t>(qrank));
    for (Int i = 0; i < qrank; ++i) qorders[static_cast<std::size_t>(i)] = quot.generator_order(i);

    for (Int code = 0; code < total; ++code) {
        Int c = code;
        IntMatrix m = IntMatrix::Zero(qrank, gens);
        for (Int j = 0; j < gens; ++j) {
            Int e = c % qn;
            c /= qn;
            for (Int i = 0; i < qrank; ++i) {
                m(i, j) = e % qorders[static_cast<std::size_t>(i)];
                e /= qorders[static_cast<std::size_t>(i)];
            }
        }
        // well-defined?
        bool ok = true;
        for (Int j = 0; j < gens && ok; ++j) {
            Int dj = g.generator_order(j);
            if (dj == 0) continue;
            for (Int i = 0; i < qrank; ++i)
                if ((dj * m(i, j)) % qorders[static_cast<std::size_t>(i)] != 0) ok = false;
        }
        if (!ok) continue;
        GroupHom h(g, quot, m);
        if (cokernel(h).is_trivial() && kernel(h) == sub) return true;
    }
    return false;
}

}  // namespace

ExtensionResult classify_extension(const FgAbGroup& sub, const FgAbGroup& quot) {
    ExtensionResult res;
    if (sub.is_trivial()) {
        res.group = quot;
        return res;
    }
    if (quot.is_trivial()) {
        res.group = sub;
        return res;
    }
    if (quot.is_free()) {  // free quotient always splits
        res.group = direct_sum(sub, quot);
        return res;
    }
    // split off the free part of the quotient; classify against its torsion
    FgAbGroup quot_t;
    quot_t.torsion = quot.torsion;
    std::vector<FgAbGroup> torsion_candidates;
    torsion_groups_of_order(sub.torsion_order() * quot_t.torsion_order(), torsion_candidates);

    std::vector<FgAbGroup> found;
    for (const auto& t : torsion_candidates) {
        FgAbGroup g = t;
        g.free_rank = sub.free_rank;
        if (realizes_extension(g, sub, quot_t)) {
            FgAbGroup full = g;
            full.free_rank += quot.free_rank;
            found.push_back(full);
        }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    if (found.size() == 1) {
        res.group = found.front();
        return res;
    }
    res.ambiguous = true;
    res.candidates = std::move(found);
    return res;
}

}  // namespace bft::abelian
