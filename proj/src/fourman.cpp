#include "bft/fourman.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <set>

namespace bft::fourman {

using boost::multiprecision::cpp_rational;

Int form_signature(const IntMatrix& q) {
    const Eigen::Index n = q.rows();
    if (q.cols() != n) throw Error("form_signature: matrix not square");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (q(i, j) != q(j, i)) throw Error("form_signature: matrix not symmetric");

    std::vector<std::vector<cpp_rational>> a(static_cast<std::size_t>(n),
                                             std::vector<cpp_rational>(static_cast<std::size_t>(n)));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a[i][j] = q(i, j);

    Int pos = 0, neg = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            Eigen::Index j = -1;
            for (Eigen::Index c = k + 1; c < n; ++c)
                if (a[k][c] != 0) {
                    j = c;
                    break;
                }
            if (j < 0) continue;  // zero row: no contribution
            // symmetric row+column addition makes the pivot nonzero for one
            // of the two signs
            for (int sign : {1, -1}) {
                if (2 * sign * a[k][j] + a[j][j] == 0) continue;
                for (Eigen::Index m = k; m < n; ++m) a[k][m] += sign * a[j][m];
                for (Eigen::Index m = k; m < n; ++m) a[m][k] += sign * a[m][j];
                break;
            }
        }
        if (a[k][k] == 0) continue;
        (a[k][k] > 0 ? pos : neg) += 1;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            cpp_rational f = a[i][k] / a[k][k];
            for (Eigen::Index m = k + 1; m < n; ++m) a[i][m] -= f * a[k][m];
            a[i][k] = 0;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) a[k][i] = 0;
        // restore symmetry of the trailing block (row ops only touched rows)
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index m = i + 1; m < n; ++m) a[m][i] = a[i][m];
    }
    return pos - neg;
}

void ManifoldDescriptor::validate() const {
    if (intersection_form.rows() != rank() || intersection_form.cols() != rank())
        throw PreconditionViolation("descriptor " + name + ": form rank != b2+ + b2-");
    if (form_signature(intersection_form) != sigma())
        throw PreconditionViolation("descriptor " + name + ": form signature != b2+ - b2-");
}

ManifoldDescriptor make_closed(std::string name, Int b1, Int b2_plus, Int b2_minus,
                               IntMatrix form, bool symplectic, bool h1_no_2torsion) {
    ManifoldDescriptor x;
    x.name = std::move(name);
    x.b1 = b1;
    x.b2_plus = b2_plus;
    x.b2_minus = b2_minus;
    x.intersection_form = std::move(form);
    x.symplectic = symplectic;
    x.h1_no_2torsion = h1_no_2torsion;
    x.components = {x.name};
    x.validate();
    return x;
}

bool is_characteristic(const IntMatrix& q, const IntVector& c) {
    if (c.size() != q.rows()) return false;
    IntVector pairing = q * c;
    for (Eigen::Index i = 0; i < q.rows(); ++i)
        if (((pairing(i) - q(i, i)) % 2 + 2) % 2 != 0) return false;
    return true;
}

bool is_characteristic(const SpincStructure& s) {
    return is_characteristic(s.manifold.intersection_form, s.c1);
}

namespace {

Int square(const IntMatrix& q, const IntVector& c) { return (c.transpose() * q * c)(0, 0); }

}  // namespace

Int virtual_dimension(const SpincStructure& s) {
    const ManifoldDescriptor& x = s.manifold;
    if (x.b1 != 0)
        throw PreconditionViolation("virtual_dimension: requires b1 = 0 (" + x.name + ")");
    if (!is_characteristic(s)) throw NotCharacteristic("virtual_dimension: c1 not characteristic");
    Int num = square(x.intersection_form, s.c1) - 2 * x.euler() - 3 * x.sigma();
    if (((num % 4) + 4) % 4 != 0)
        throw NonIntegerDimension("virtual_dimension: (c1^2 - 2chi - 3sigma) not divisible by 4");
    return num / 4;
}

Int SurfaceData::self_intersection(const ManifoldDescriptor& x) const {
    return square(x.intersection_form, homology_class);
}

ManifoldDescriptor blowup(const ManifoldDescriptor& x) {
    ManifoldDescriptor y = x;
    const Eigen::Index n = x.rank();
    y.name = x.name + "#-CP2";
    y.b2_minus += 1;
    y.intersection_form = IntMatrix::Zero(n + 1, n + 1);
    y.intersection_form.topLeftCorner(n, n) = x.intersection_form;
    y.intersection_form(n, n) = -1;
    y.exceptional.push_back(n);
    return y;
}

SpincStructure blowup_spinc(const SpincStructure& s, Int r) {
    if (!is_characteristic(s)) throw NotCharacteristic("blowup_spinc: c1 not characteristic");
    SpincStructure t;
    t.manifold = blowup(s.manifold);
    t.c1 = IntVector::Zero(s.c1.size() + 1);
    t.c1.head(s.c1.size()) = s.c1;
    t.c1(s.c1.size()) = 2 * r + 1;
    if (s.manifold.b1 == 0 && virtual_dimension(t) != virtual_dimension(s) - r * (r + 1))
        throw Error("blowup_spinc: dimension drop r(r+1) violated");
    return t;
}

ManifoldDescriptor glue(const ManifoldDescriptor& x1, const ManifoldDescriptor& x2,
                        const GlueSpec& along) {
    ManifoldDescriptor y;
    y.b1 = x1.b1 + x2.b1;
    y.b2_plus = x1.b2_plus + x2.b2_plus;
    y.b2_minus = x1.b2_minus + x2.b2_minus;
    const Eigen::Index n1 = x1.rank(), n2 = x2.rank();
    y.intersection_form = IntMatrix::Zero(n1 + n2, n1 + n2);
    y.intersection_form.topLeftCorner(n1, n1) = x1.intersection_form;
    y.intersection_form.bottomRightCorner(n2, n2) = x2.intersection_form;
    y.h1_no_2torsion = x1.h1_no_2torsion && x2.h1_no_2torsion;
    y.symplectic = false;
    y.components = x1.components;
    y.components.insert(y.components.end(), x2.components.begin(), x2.components.end());

    if (std::holds_alternative<ConnectedSum>(along)) {
        if (!x1.closed() || !x2.closed())
            throw IncompatibleBoundary("glue: connected sum requires closed pieces");
        y.name = x1.name + " # " + x2.name;
        return y;  // chi = chi1 + chi2 - 2 holds for the derived value
    }

    const auto& pair = std::get<BoundaryPair>(along);
    auto take = [](const ManifoldDescriptor& x, const std::string& label) {
        for (const auto& b : x.boundary)
            if (b.label == label) {
                if (!b.swf_spherical || !b.rational_homology_sphere)
                    throw IncompatibleBoundary("glue: boundary " + label +
                                               " lacks the required flags");
                return b;
            }
        throw IncompatibleBoundary("glue: no boundary component " + label);
    };
    take(x1, pair.label1);
    take(x2, pair.label2);
    for (const auto& b : x1.boundary)
        if (b.label != pair.label1) y.boundary.push_back(b);
    for (const auto& b : x2.boundary)
        if (b.label != pair.label2) y.boundary.push_back(b);
    y.name = x1.name + " u " + x2.name;
    Int chi = x1.euler() + x2.euler();
    if (y.closed()) {
        if (y.euler() != chi)
            throw IncompatibleBoundary("glue: Euler characteristic inconsistent with Betti data");
    } else {
        y.stored_chi = chi;
    }
    return y;
}

ManifoldDescriptor log_transform(const ManifoldDescriptor& x, const SurfaceData& fishtail,
                                 Int p) {
    if (p < 1) throw PreconditionViolation("log_transform: p must be positive");
    if (fishtail.kind != SurfaceData::Kind::ImmersedSphere ||
        fishtail.positive_double_points != 1 || !fishtail.non_torsion ||
        fishtail.self_intersection(x) != 0)
        throw PreconditionViolation(
            "log_transform: need an immersed sphere with one positive double point, "
            "non-torsion class of square zero");
    ManifoldDescriptor y = x;
    y.name = x.name + "_(" + std::to_string(p) + ")";
    y.log_record = LogRecord{p, fishtail.homology_class};
    return y;
}

IntMatrix cp_plumbing_matrix(Int p) {
    if (p < 2) throw OutOfRange("cp_plumbing_matrix: p must be >= 2");
    const Eigen::Index n = p - 1;
    IntMatrix m = IntMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = i == 0 ? -(p + 2) : -2;
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = 1;
    }
    return m;
}

ManifoldDescriptor rational_blowdown(const ManifoldDescriptor& x, Int p,
                                     const IntMatrix& config) {
    IntMatrix plumbing = cp_plumbing_matrix(p);
    if (config.rows() != x.rank() || config.cols() != p - 1)
        throw BadEmbedding("rational_blowdown: expected " + std::to_string(p - 1) +
                           " classes in the ambient basis");
    IntMatrix gram = config.transpose() * x.intersection_form * config;
    if (gram != plumbing)
        throw BadEmbedding("rational_blowdown: classes do not span the plumbing lattice");

    IntMatrix complement = abelian::integer_nullspace(config.transpose() * x.intersection_form);
    if (complement.cols() != x.rank() - (p - 1))
        throw BadEmbedding("rational_blowdown: complement rank mismatch");

    ManifoldDescriptor y;
    y.name = x.name + "_rbd" + std::to_string(p);
    y.b1 = x.b1;
    y.b2_plus = x.b2_plus;
    y.b2_minus = x.b2_minus - (p - 1);
    y.intersection_form = complement.transpose() * x.intersection_form * complement;
    y.h1_no_2torsion = x.h1_no_2torsion;
    y.symplectic = false;
    y.components = {y.name};
    y.rbd_record = RbdRecord{p, config, complement,
                             std::make_shared<const ManifoldDescriptor>(x)};
    return y;
}

SpincStructure lift_spinc(const SpincStructure& s_p) {
    const ManifoldDescriptor& xp = s_p.manifold;
    if (!xp.rbd_record)
        throw PreconditionViolation("lift_spinc: manifold carries no blowdown record");
    const RbdRecord& rec = *xp.rbd_record;
    const ManifoldDescriptor& x = *rec.upstream;
    if (!xp.h1_no_2torsion || !x.h1_no_2torsion)
        throw NonUnique("lift_spinc: uniqueness needs no 2-torsion in H^1 on both sides");
    if (!is_characteristic(s_p)) throw NotCharacteristic("lift_spinc: c1 not characteristic");

    const IntMatrix& q = x.intersection_form;
    const Eigen::Index n = q.rows();
    const Int pm1 = rec.p - 1;
    // pairings of the lift with the complement basis are forced
    IntVector rb = xp.intersection_form * s_p.c1;
    const Int target_sq = square(xp.intersection_form, s_p.c1) - pm1;

    IntMatrix m(n, n);
    m.topRows(rec.complement.cols()) = rec.complement.transpose() * q;
    m.bottomRows(pm1) = rec.config.transpose() * q;
    abelian::SmithForm snf = abelian::smith_normal_form(m);
    for (Eigen::Index i = 0; i < n; ++i)
        if (snf.diag(i, i) == 0) throw Error("lift_spinc: degenerate pairing system");

    const Int bound = rec.p + 4;
    std::vector<IntVector> lifts;
    std::vector<Int> a(static_cast<std::size_t>(pm1));
    auto search = [&](auto&& self, Eigen::Index i) -> void {
        if (i == pm1) {
            IntVector r(n);
            r.head(rec.complement.cols()) = rb;
            for (Eigen::Index j = 0; j < pm1; ++j)
                r(rec.complement.cols() + j) = a[static_cast<std::size_t>(j)];
            IntVector u = snf.left * r;
            IntVector t(n);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (u(j) % snf.diag(j, j) != 0) return;
                t(j) = u(j) / snf.diag(j, j);
            }
            IntVector c = snf.right * t;
            if (!is_characteristic(q, c)) return;
            if (square(q, c) != target_sq) return;
            lifts.push_back(c);
            return;
        }
        Int diag = rec.config.col(i).transpose() * q * rec.config.col(i);
        for (Int v = -bound; v <= bound; ++v) {
            if ((((v - diag) % 2) + 2) % 2 != 0) continue;  // characteristic parity
            a[static_cast<std::size_t>(i)] = v;
            self(self, i + 1);
        }
    };
    search(search, 0);

    std::sort(lifts.begin(), lifts.end(),
              [](const IntVector& u, const IntVector& v) {
                  return std::lexicographical_compare(u.data(), u.data() + u.size(), v.data(),
                                                      v.data() + v.size());
              });
    lifts.erase(std::unique(lifts.begin(), lifts.end(),
                            [](const IntVector& u, const IntVector& v) { return u == v; }),
                lifts.end());
    if (lifts.empty()) throw NoLift("lift_spinc: no characteristic lift with equal dimension");

    // All survivors pair equally with the complement lattice, so they differ
    // only by rational multiples of the blown-down configuration classes and
    // share the same dimension. The boundary data that singles out the true
    // lift lives in torsion that is not modeled; a fixed sign convention on
    // the configuration pairings picks the representative.
    SpincStructure s;
    s.manifold = x;
    s.c1 = lifts.front();
    IntVector best = rec.config.transpose() * q * s.c1;
    for (const IntVector& cand : lifts) {
        IntVector pair_vec = rec.config.transpose() * q * cand;
        if (std::lexicographical_compare(best.data(), best.data() + best.size(),
                                         pair_vec.data(), pair_vec.data() + pair_vec.size())) {
            best = pair_vec;
            s.c1 = cand;
        }
    }
    return s;
}

}  // namespace bft::fourman

namespace bft::catalog {

using namespace fourman;

namespace {

IntMatrix e8_form() {
    // -2 on the diagonal, +1 along the E8 graph: a chain of seven vertices
    // with the eighth attached to the third
    IntMatrix m = IntMatrix::Zero(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) m(i, i) = -2;
    for (Eigen::Index i = 0; i + 1 < 7; ++i) m(i, i + 1) = m(i + 1, i) = 1;
    m(2, 7) = m(7, 2) = 1;
    return m;
}

IntMatrix hyperbolic() {
    IntMatrix h(2, 2);
    h << 0, 1, 1, 0;
    return h;
}

}  // namespace

ManifoldDescriptor s4() { return make_closed("S4", 0, 0, 0, IntMatrix(0, 0)); }

ManifoldDescriptor cp2() {
    IntMatrix f(1, 1);
    f << 1;
    return make_closed("CP2", 0, 1, 0, f, /*symplectic=*/true);
}

ManifoldDescriptor cp2_bar() {
    IntMatrix f(1, 1);
    f << -1;
    return make_closed("-CP2", 0, 0, 1, f);
}

ManifoldDescriptor s2xs2() { return make_closed("S2xS2", 0, 1, 1, hyperbolic(), true); }

ManifoldDescriptor k3() {
    IntMatrix f = IntMatrix::Zero(22, 22);
    f.block(0, 0, 8, 8) = e8_form();
    f.block(8, 8, 8, 8) = e8_form();
    for (int i = 0; i < 3; ++i) f.block(16 + 2 * i, 16 + 2 * i, 2, 2) = hyperbolic();
    return make_closed("K3", 0, 3, 19, f, /*symplectic=*/true);
}

ManifoldDescriptor k3_sum(Int m) {
    if (m < 1) throw OutOfRange("k3_sum: m must be >= 1");
    ManifoldDescriptor x = k3();
    for (Int i = 1; i < m; ++i) x = glue(x, k3(), ConnectedSum{});
    x.name = "#" + std::to_string(m) + "K3";
    return x;
}

}  // namespace bft::catalog
