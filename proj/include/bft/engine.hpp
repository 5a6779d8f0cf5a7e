#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bft/cohomotopy.hpp"
#include "bft/fourman.hpp"

namespace bft::engine {

using abelian::FgAbGroup;
using fourman::ManifoldDescriptor;
using fourman::SurfaceData;

/// Knowledge about one invariant value. The lattice is
/// Unknown < Nonzero < {NonzeroTorsion, NonzeroFree}; Zero conflicts with
/// every nonzero state, and the two refined nonzero states conflict with
/// each other.
enum class BFState { Unknown, Zero, Nonzero, NonzeroTorsion, NonzeroFree };

bool is_nonzero(BFState s);
std::string to_string(BFState s);

/// Merge of two knowledge states; throws Inconsistent on conflict.
BFState merge_states(BFState a, BFState b);

enum class Tri { False, Unknown, True };

struct SWFact {
    enum class Parity { Unknown, Even, Odd };
    std::optional<Int> value;
    Parity parity = Parity::Unknown;

    Parity effective_parity() const;
    /// Merge; throws Inconsistent on conflicting values/parities.
    void merge(const SWFact& o);
    bool operator==(const SWFact&) const = default;
};

struct BFValue {
    BFState state = BFState::Unknown;
    std::optional<FgAbGroup> group;  // value group, when computable
};

struct FactKey {
    std::string manifold;
    std::vector<Int> c1;

    auto operator<=>(const FactKey&) const = default;
    std::string to_string() const;
};

FactKey make_key(const std::string& manifold, const IntVector& c1);
IntVector key_c1(const FactKey& k);

struct Fact {
    BFValue bf;
    SWFact sw;
    std::vector<std::string> provenance;
};

enum class ClassStatus { Unknown, Confirmed, Excluded };

struct ManifoldEntry {
    ManifoldDescriptor descriptor;
    std::optional<IntVector> canonical_class;  // symplectic canonical c1
    Tri bf_blowup_simple = Tri::Unknown;
    Tri mod2_sw_simple = Tri::Unknown;
    bool cup_products_even_or_torsion = false;  // user-supplied H^1 cup condition
    std::optional<Int> homogeneous_dim;
    std::vector<SurfaceData> surfaces;  // declared embedded/immersed surfaces
};

/// Declared relation: the two sides share a common piece, the complements
/// being negative definite with b1 = 0 (transfer rules apply).
struct ComplementPair {
    FactKey a, b;
};

/// Declared relation: `blown` is `base` with one point blown up, the new
/// exceptional class being the last basis vector.
struct BlowupRel {
    std::string base, blown;
};

struct KnowledgeBase {
    std::map<std::string, ManifoldEntry> manifolds;
    std::map<FactKey, Fact> facts;
    std::vector<ComplementPair> pairs;
    std::vector<BlowupRel> blowups;
    std::map<std::string, std::map<std::vector<Int>, ClassStatus>> basic_classes;
};

void add_manifold(KnowledgeBase& kb, ManifoldDescriptor x,
                  std::optional<IntVector> canonical = std::nullopt);
void declare_common_complement(KnowledgeBase& kb, FactKey a, FactKey b);
void declare_blowup(KnowledgeBase& kb, std::string base, std::string blown);

/// Virtual dimension of a fact key; requires the manifold present, b1 = 0.
Int key_dimension(const KnowledgeBase& kb, const FactKey& key);

/// Target group of the invariant for a fact key, when computable.
std::optional<FgAbGroup> target_group(const KnowledgeBase& kb, const FactKey& key);

/// Merge a fact into the base; checks consistency and the group-shape
/// constraints (torsion/free states must be realizable in the target group).
void assert_fact(KnowledgeBase& kb, const FactKey& key, BFState state,
                 std::optional<SWFact> sw = std::nullopt,
                 const std::string& provenance = "asserted");

/// One candidate rule application, produced by scanning the base.
struct Derivation {
    // exactly one of fact-level / manifold-level payloads is meaningful
    std::optional<FactKey> key;
    BFState state = BFState::Unknown;
    std::optional<SWFact> sw;

    std::optional<std::string> flag_manifold;  // manifold-level target
    std::optional<Int> homogeneous_dim;
    Tri bf_blowup_simple = Tri::Unknown;
    Tri mod2_sw_simple = Tri::Unknown;

    std::string rule;
    std::string because;
};

/// All rule applications currently enabled by the base (including ones that
/// would not change anything).
std::vector<Derivation> candidate_derivations(const KnowledgeBase& kb);

/// Apply one derivation; returns true if the base changed.
bool apply(KnowledgeBase& kb, const Derivation& d);

/// Least fixed point of the rule set.
KnowledgeBase infer(KnowledgeBase kb);

Tri condition_star(const KnowledgeBase& kb, const FactKey& key);

struct BFDimension {
    enum class Kind { MinusInfinity, PlusInfinity, Exact, BoundedBelow, Unknown };
    Kind kind = Kind::Unknown;
    Int value = 0;  // Exact / BoundedBelow payload

    std::string to_string() const;
    bool operator==(const BFDimension&) const = default;
};

BFDimension bf_dimension(const KnowledgeBase& kb, const std::string& manifold);

enum class VerdictKind { Consistent, Obstructed, Unknown };

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::string reason;
};

/// Compare a decomposition of X satisfying the non-vanishing hypotheses with
/// a candidate alternative decomposition; piece names refer to the base.
Verdict decomposition_verdict(const KnowledgeBase& kb,
                              const std::vector<std::string>& x_pieces,
                              const std::vector<std::string>& xprime_pieces);

/// Adjunction check of a candidate basic class against a surface. May record
/// an exclusion or derive a new nonzero fact (immersed disjunction).
Verdict adjunction_verdict(KnowledgeBase& kb, const std::string& manifold,
                           const IntVector& k_class, const SurfaceData& surface);

struct TypeVerdicts {
    Tri bf_blowup_simple = Tri::Unknown;
    std::optional<Int> homogeneous_dim;
    Tri mod2_sw_simple = Tri::Unknown;
    std::vector<std::string> reasons;
};

TypeVerdicts simple_type_verdict(const KnowledgeBase& kb, const std::string& manifold);

/// Basic classes of the k-fold blowup: base classes extended by all 2^k
/// sign vectors on the exceptional classes.
std::vector<IntVector> blowup_basic_classes(const std::vector<IntVector>& base, Int k);

/// A basic class of a log-transformed manifold: base class plus a multiple
/// of the (non-integral for p > 1) fiber class.
struct LogBasicClass {
    IntVector base_class;
    Int fiber_coeff = 0;
    BFState state = BFState::Unknown;
};

std::vector<LogBasicClass> basic_classes_log_transform(const KnowledgeBase& kb,
                                                       const std::string& manifold,
                                                       const SurfaceData& fishtail, Int p);

}  // namespace bft::engine
