#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bft/abelian.hpp"

namespace bft::fourman {

struct BoundaryComponent {
    std::string label;
    bool swf_spherical = false;
    bool rational_homology_sphere = false;

    bool operator==(const BoundaryComponent&) const = default;
};

/// Exact signature of a symmetric integer matrix (rational diagonalization).
Int form_signature(const IntMatrix& q);

/// Record left behind by a logarithmic transform: alpha = p * beta with f the
/// dual of the multiple fiber beta. f is not an integral class of the ambient
/// lattice for p > 1, so basic classes of the transformed manifold are kept
/// as (base class, fiber coefficient) pairs downstream.
struct LogRecord {
    Int p = 1;
    IntVector alpha;
};

/// Correspondence data recorded by a rational blowdown: the configuration
/// classes in the upstream basis and an integral basis of their orthogonal
/// complement, which is the basis the downstream form is written in.
struct ManifoldDescriptor;

struct RbdRecord {
    Int p = 2;
    IntMatrix config;      // columns: the p-1 configuration classes, upstream basis
    IntMatrix complement;  // columns: basis of the orthogonal complement lattice
    std::shared_ptr<const ManifoldDescriptor> upstream;
};

struct ManifoldDescriptor {
    std::string name;
    Int b1 = 0;
    Int b2_plus = 0;
    Int b2_minus = 0;
    IntMatrix intersection_form;  // symmetric, rank b2_plus + b2_minus
    bool h1_no_2torsion = true;
    bool symplectic = false;
    std::vector<BoundaryComponent> boundary;
    Int stored_chi = 0;  // Euler characteristic input, used only when bounded

    std::vector<std::string> components;        // gluing pieces; {name} if atomic
    std::vector<Eigen::Index> exceptional;      // basis indices added by blowup
    std::optional<LogRecord> log_record;
    std::optional<RbdRecord> rbd_record;

    bool closed() const { return boundary.empty(); }
    Int rank() const { return b2_plus + b2_minus; }
    Int sigma() const { return b2_plus - b2_minus; }
    Int euler() const { return closed() ? 2 - 2 * b1 + rank() : stored_chi; }
    Int piece_count() const { return components.empty() ? 1 : static_cast<Int>(components.size()); }

    /// Checks rank and signature of the form against the Betti numbers.
    void validate() const;
};

ManifoldDescriptor make_closed(std::string name, Int b1, Int b2_plus, Int b2_minus,
                               IntMatrix form, bool symplectic = false,
                               bool h1_no_2torsion = true);

struct SpincStructure {
    ManifoldDescriptor manifold;
    IntVector c1;
};

/// <c1, x> = x.x mod 2 for every basis vector x.
bool is_characteristic(const IntMatrix& q, const IntVector& c);
bool is_characteristic(const SpincStructure& s);

/// d = (c1^2 - 2 chi - 3 sigma) / 4.
Int virtual_dimension(const SpincStructure& s);

struct SurfaceData {
    enum class Kind { Embedded, ImmersedSphere };
    Kind kind = Kind::Embedded;
    IntVector homology_class;
    Int genus = 0;                   // embedded only
    Int positive_double_points = 0;  // immersed only
    Int negative_double_points = 0;
    bool non_torsion = true;

    Int self_intersection(const ManifoldDescriptor& x) const;
};

/// Connected sum with the reversed projective plane: adds a <-1> class.
ManifoldDescriptor blowup(const ManifoldDescriptor& x);

/// Twist the spin-c structure by (2r+1) E on the blown-up manifold;
/// d drops by r(r+1).
SpincStructure blowup_spinc(const SpincStructure& s, Int r);

struct ConnectedSum {};
struct BoundaryPair {
    std::string label1, label2;
};
using GlueSpec = std::variant<ConnectedSum, BoundaryPair>;

ManifoldDescriptor glue(const ManifoldDescriptor& x1, const ManifoldDescriptor& x2,
                        const GlueSpec& along);

/// Multiplicity-p torus surgery on a fishtail neighborhood. Betti numbers
/// are preserved; the class correspondence alpha = p * beta is recorded.
ManifoldDescriptor log_transform(const ManifoldDescriptor& x, const SurfaceData& fishtail,
                                 Int p);

/// Gram matrix of the p-sphere linear plumbing: diag -(p+2), -2, ..., -2
/// with 1 off the diagonal, rank p-1.
IntMatrix cp_plumbing_matrix(Int p);

/// Replace the plumbing spanned by `config` (columns, upstream basis) by a
/// rational ball: b2_minus drops by p-1.
ManifoldDescriptor rational_blowdown(const ManifoldDescriptor& x, Int p,
                                     const IntMatrix& config);

/// Unique characteristic lift upstream of a spin-c structure on a rational
/// blowdown, with equal virtual dimension.
SpincStructure lift_spinc(const SpincStructure& s_p);

}  // namespace bft::fourman

namespace bft::catalog {

fourman::ManifoldDescriptor s4();
fourman::ManifoldDescriptor cp2();
fourman::ManifoldDescriptor cp2_bar();
fourman::ManifoldDescriptor s2xs2();
fourman::ManifoldDescriptor k3();
/// Connected sum of m copies of K3.
fourman::ManifoldDescriptor k3_sum(Int m);

}  // namespace bft::catalog
