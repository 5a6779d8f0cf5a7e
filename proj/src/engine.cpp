#include "bft/engine.hpp"

#include <algorithm>
#include <sstream>

namespace bft::engine {

using fourman::SpincStructure;

bool is_nonzero(BFState s) {
    return s == BFState::Nonzero || s == BFState::NonzeroTorsion || s == BFState::NonzeroFree;
}

std::string to_string(BFState s) {
    switch (s) {
        case BFState::Unknown: return "Unknown";
        case BFState::Zero: return "Zero";
        case BFState::Nonzero: return "Nonzero";
        case BFState::NonzeroTorsion: return "NonzeroTorsion";
        default: return "NonzeroFree";
    }
}

BFState merge_states(BFState a, BFState b) {
    if (a == b) return a;
    if (a == BFState::Unknown) return b;
    if (b == BFState::Unknown) return a;
    if (a == BFState::Zero || b == BFState::Zero)
        throw Inconsistent("zero and nonzero asserted for the same fact");
    if (a == BFState::Nonzero) return b;
    if (b == BFState::Nonzero) return a;
    throw Inconsistent("torsion and non-torsion asserted for the same fact");
}

SWFact::Parity SWFact::effective_parity() const {
    if (value) return (*value % 2 != 0) ? Parity::Odd : Parity::Even;
    return parity;
}

void SWFact::merge(const SWFact& o) {
    if (o.value) {
        if (value && *value != *o.value) throw Inconsistent("conflicting SW values");
        value = o.value;
    }
    Parity p = effective_parity(), q = o.effective_parity();
    if (p != Parity::Unknown && q != Parity::Unknown && p != q)
        throw Inconsistent("conflicting SW parities");
    if (parity == Parity::Unknown) parity = q;
}

std::string FactKey::to_string() const {
    std::ostringstream os;
    os << manifold << "[";
    for (std::size_t i = 0; i < c1.size(); ++i) os << (i ? "," : "") << c1[i];
    os << "]";
    return os.str();
}

FactKey make_key(const std::string& manifold, const IntVector& c1) {
    FactKey k;
    k.manifold = manifold;
    k.c1.assign(c1.data(), c1.data() + c1.size());
    return k;
}

IntVector key_c1(const FactKey& k) {
    IntVector v(static_cast<Eigen::Index>(k.c1.size()));
    for (std::size_t i = 0; i < k.c1.size(); ++i) v(static_cast<Eigen::Index>(i)) = k.c1[i];
    return v;
}

void add_manifold(KnowledgeBase& kb, ManifoldDescriptor x, std::optional<IntVector> canonical) {
    ManifoldEntry e;
    e.descriptor = std::move(x);
    e.canonical_class = std::move(canonical);
    kb.manifolds.insert_or_assign(e.descriptor.name, std::move(e));
}

void declare_common_complement(KnowledgeBase& kb, FactKey a, FactKey b) {
    kb.pairs.push_back({std::move(a), std::move(b)});
}

void declare_blowup(KnowledgeBase& kb, std::string base, std::string blown) {
    kb.blowups.push_back({std::move(base), std::move(blown)});
}

namespace {

const ManifoldEntry* find_entry(const KnowledgeBase& kb, const std::string& name) {
    auto it = kb.manifolds.find(name);
    return it == kb.manifolds.end() ? nullptr : &it->second;
}

std::optional<Int> safe_dim(const KnowledgeBase& kb, const FactKey& key) {
    const ManifoldEntry* e = find_entry(kb, key.manifold);
    if (!e) return std::nullopt;
    try {
        return fourman::virtual_dimension({e->descriptor, key_c1(key)});
    } catch (const Error&) {
        return std::nullopt;
    }
}

BFState fact_state(const KnowledgeBase& kb, const FactKey& key) {
    auto it = kb.facts.find(key);
    return it == kb.facts.end() ? BFState::Unknown : it->second.bf.state;
}

SWFact::Parity fact_sw_parity(const KnowledgeBase& kb, const FactKey& key) {
    auto it = kb.facts.find(key);
    return it == kb.facts.end() ? SWFact::Parity::Unknown : it->second.sw.effective_parity();
}

/// Blockwise split of a c1 vector over the listed gluing pieces; empty when
/// a piece is missing from the base or the ranks do not add up.
std::vector<std::pair<std::string, IntVector>> split_c1(const KnowledgeBase& kb,
                                                        const ManifoldEntry& e,
                                                        const IntVector& c1) {
    std::vector<std::pair<std::string, IntVector>> out;
    if (e.descriptor.piece_count() < 2) return out;
    Eigen::Index offset = 0;
    for (const auto& name : e.descriptor.components) {
        const ManifoldEntry* pe = find_entry(kb, name);
        if (!pe) return {};
        Eigen::Index r = pe->descriptor.rank();
        if (offset + r > c1.size()) return {};
        out.emplace_back(name, c1.segment(offset, r));
        offset += r;
    }
    if (offset != c1.size()) return {};
    return out;
}

bool is_homogeneous_zero(const ManifoldEntry& e) {
    if (e.homogeneous_dim && *e.homogeneous_dim == 0) return true;
    return e.descriptor.symplectic && e.descriptor.b2_plus >= 2;
}

}  // namespace

Int key_dimension(const KnowledgeBase& kb, const FactKey& key) {
    const ManifoldEntry* e = find_entry(kb, key.manifold);
    if (!e) throw Error("key_dimension: unknown manifold " + key.manifold);
    return fourman::virtual_dimension({e->descriptor, key_c1(key)});
}

std::optional<FgAbGroup> target_group(const KnowledgeBase& kb, const FactKey& key) {
    const ManifoldEntry* e = find_entry(kb, key.manifold);
    if (!e) return std::nullopt;
    const auto& x = e->descriptor;
    if (x.b1 != 0 || x.b2_plus < 2) return std::nullopt;
    std::optional<Int> d = safe_dim(kb, key);
    if (!d || *d < 0 || *d > 6) return std::nullopt;
    if ((*d + 1 + x.b2_plus) % 2 != 0) return std::nullopt;
    Int k = (*d + 1 + x.b2_plus) / 2;
    try {
        return cohomotopy::cp_cohomotopy(k - 1, *d);
    } catch (const OutOfRange&) {
        return std::nullopt;
    }
}

void assert_fact(KnowledgeBase& kb, const FactKey& key, BFState state, std::optional<SWFact> sw,
                 const std::string& provenance) {
    const ManifoldEntry* e = find_entry(kb, key.manifold);
    if (!e) throw Error("assert_fact: unknown manifold " + key.manifold);
    Fact& f = kb.facts[key];
    if (!f.bf.group) f.bf.group = target_group(kb, key);

    std::optional<Int> d = safe_dim(kb, key);
    if (state == BFState::NonzeroFree && d && *d % 2 != 0)
        throw Inconsistent(key.to_string() + ": odd-dimensional value cannot have infinite order");
    if (f.bf.group) {
        if (state == BFState::NonzeroTorsion && f.bf.group->torsion.empty())
            throw Inconsistent(key.to_string() + ": value group " + f.bf.group->to_string() +
                               " has no torsion");
        if (state == BFState::NonzeroFree && f.bf.group->free_rank == 0)
            throw Inconsistent(key.to_string() + ": value group " + f.bf.group->to_string() +
                               " has no free part");
        if (is_nonzero(state) && f.bf.group->is_trivial())
            throw Inconsistent(key.to_string() + ": value group is trivial");
    }

    BFState merged = merge_states(f.bf.state, state);
    bool changed = merged != f.bf.state;
    f.bf.state = merged;
    if (sw) {
        SWFact before = f.sw;
        f.sw.merge(*sw);
        changed = changed || !(before == f.sw);
    }
    if (changed) f.provenance.push_back(provenance);
}

Tri condition_star(const KnowledgeBase& kb, const FactKey& key) {
    const ManifoldEntry* e = find_entry(kb, key.manifold);
    if (!e) return Tri::Unknown;
    if (e->descriptor.b1 != 0) return Tri::False;
    if (e->descriptor.b2_plus < 2) return Tri::False;
    std::optional<Int> d = safe_dim(kb, key);
    if (!d) return Tri::Unknown;
    if (*d > 3) return Tri::False;
    if (*d <= 0) return Tri::True;
    switch (fact_state(kb, key)) {
        case BFState::Zero:
        case BFState::NonzeroTorsion: return Tri::True;
        case BFState::NonzeroFree: return Tri::False;
        default: return Tri::Unknown;
    }
}

namespace {

Derivation fact_derivation(FactKey key, BFState state, std::string rule, std::string because) {
    Derivation d;
    d.key = std::move(key);
    d.state = state;
    d.rule = std::move(rule);
    d.because = std::move(because);
    return d;
}

void forced_value_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [key, fact] : kb.facts) {
        const ManifoldEntry* e = find_entry(kb, key.manifold);
        if (!e) continue;
        const auto& x = e->descriptor;
        if (x.b2_plus == 0) {
            out.push_back(fact_derivation(key, BFState::Nonzero, "b+0-nonvanishing",
                                          "b2+ = 0 forces a nonzero invariant"));
            continue;
        }
        if (x.b2_plus == 1 && x.b1 == 0) {
            out.push_back(fact_derivation(key, BFState::Zero, "b+1-vanishing",
                                          "b2+ = 1, b1 = 0 forces vanishing"));
            continue;
        }
        std::optional<Int> d = safe_dim(kb, key);
        if (d && *d < 0)
            out.push_back(fact_derivation(key, BFState::Zero, "dim-negative",
                                          "d = " + std::to_string(*d) + " < 0 with b2+ >= 1"));
    }
}

void taubes_rule(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [name, e] : kb.manifolds) {
        if (!e.descriptor.symplectic || !e.canonical_class) continue;
        if (e.descriptor.b2_plus - e.descriptor.b1 < 2) continue;
        Derivation d;
        d.key = make_key(name, *e.canonical_class);
        d.state = BFState::Unknown;
        SWFact sw;
        sw.parity = SWFact::Parity::Odd;
        d.sw = sw;
        d.rule = "taubes-sw";
        d.because = "symplectic with b2+ - b1 >= 2: canonical SW invariant is odd";
        out.push_back(std::move(d));
    }
}

void sw_bf_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [key, fact] : kb.facts) {
        const ManifoldEntry* e = find_entry(kb, key.manifold);
        if (!e) continue;
        const auto& x = e->descriptor;
        if (x.b2_plus <= x.b1 + 1) continue;
        std::optional<Int> d = safe_dim(kb, key);
        if (!d || *d != 0) continue;
        bool sw_nonzero = fact.sw.effective_parity() == SWFact::Parity::Odd ||
                          (fact.sw.value && *fact.sw.value != 0);
        if (sw_nonzero)
            out.push_back(fact_derivation(key, BFState::Nonzero, "sw-to-bf",
                                          "nonzero SW invariant in dimension 0"));
        if (fact.bf.state == BFState::Zero) {
            Derivation dz;
            dz.key = key;
            dz.state = BFState::Unknown;
            SWFact sw;
            sw.value = 0;
            sw.parity = SWFact::Parity::Even;
            dz.sw = sw;
            dz.rule = "bf-to-sw";
            dz.because = "vanishing invariant in dimension 0 forces SW = 0";
            out.push_back(std::move(dz));
        }
    }
}

void nonvan_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [key, fact] : kb.facts) {
        const ManifoldEntry* e = find_entry(kb, key.manifold);
        if (!e || e->descriptor.piece_count() < 2) continue;
        auto pieces = split_c1(kb, *e, key_c1(key));
        if (pieces.empty()) continue;
        const Int m = static_cast<Int>(pieces.size());

        bool hyp = true;        // b1 = 0 and d = 0 on each piece
        bool b2_ok = true;      // every b2+ = 3 mod 4
        bool sw_all_odd = true;
        bool sw_some_even = false;
        for (const auto& [pname, pc1] : pieces) {
            const ManifoldEntry* pe = find_entry(kb, pname);
            if (pe->descriptor.b1 != 0) hyp = false;
            std::optional<Int> pd = safe_dim(kb, make_key(pname, pc1));
            if (!pd || *pd != 0) hyp = false;
            if (pe->descriptor.b2_plus % 4 != 3) b2_ok = false;
            SWFact::Parity p = fact_sw_parity(kb, make_key(pname, pc1));
            if (p != SWFact::Parity::Odd) sw_all_odd = false;
            if (p == SWFact::Parity::Even) sw_some_even = true;
        }
        if (!hyp) continue;
        bool mod8_ok = m != 4 || e->descriptor.b2_plus % 8 == 4;

        if (b2_ok && sw_all_odd && m <= 4 && mod8_ok) {
            Int d = m - 1;
            BFState s = d > 0 ? BFState::NonzeroTorsion : BFState::Nonzero;
            out.push_back(fact_derivation(
                key, s, "bf-nonvan",
                "gluing of " + std::to_string(m) +
                    " pieces, each b2+ = 3 mod 4 with odd SW, satisfies the non-vanishing "
                    "criterion"));
        }
        if (!b2_ok || m > 4 || !mod8_ok || sw_some_even) {
            std::string why = m > 4                ? "more than 4 pieces"
                              : !b2_ok             ? "a piece has b2+ != 3 mod 4"
                              : !mod8_ok           ? "4 pieces but b2+ != 4 mod 8"
                                                   : "a piece has even SW invariant";
            out.push_back(fact_derivation(key, BFState::Zero, "bf-nonvan-converse", why));
        }
    }
}

void sum_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [key, fact] : kb.facts) {
        const ManifoldEntry* e = find_entry(kb, key.manifold);
        if (!e || e->descriptor.piece_count() < 2) continue;
        auto pieces = split_c1(kb, *e, key_c1(key));
        if (pieces.empty()) continue;
        for (const auto& [pname, pc1] : pieces) {
            if (fact_state(kb, make_key(pname, pc1)) == BFState::Zero)
                out.push_back(fact_derivation(key, BFState::Zero, "sum-factor-vanishing",
                                              "restriction to " + pname + " vanishes"));
            if (is_nonzero(fact.bf.state))
                out.push_back(fact_derivation(make_key(pname, pc1), BFState::Nonzero,
                                              "sum-nonvanishing",
                                              "nonzero invariant of the glued manifold " +
                                                  key.manifold + " restricts nontrivially"));
        }
    }
}

void one_dim_rule(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [key, fact] : kb.facts) {
        const ManifoldEntry* e = find_entry(kb, key.manifold);
        if (!e || e->descriptor.piece_count() != 2) continue;
        std::optional<Int> d = safe_dim(kb, key);
        if (!d || *d != 1) continue;
        auto pieces = split_c1(kb, *e, key_c1(key));
        if (pieces.size() != 2) continue;
        for (int i = 0; i < 2; ++i) {
            const auto& [n_name, n_c1] = pieces[static_cast<std::size_t>(i)];
            const auto& [x_name, x_c1] = pieces[static_cast<std::size_t>(1 - i)];
            const ManifoldEntry* ne = find_entry(kb, n_name);
            const ManifoldEntry* xe = find_entry(kb, x_name);
            if (ne->descriptor.b2_plus != 0 || ne->descriptor.b1 != 0) continue;
            if (xe->descriptor.b2_plus < 2 || xe->descriptor.b1 != 0) continue;
            std::optional<Int> dn = safe_dim(kb, make_key(n_name, n_c1));
            if (dn && *dn <= -3)
                out.push_back(fact_derivation(key, BFState::Zero, "1-dim-vanishing",
                                              "d = 1 and the Dirac index over the definite "
                                              "piece " + n_name + " is negative"));
        }
    }
}

void transfer_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& pair : kb.pairs) {
        std::optional<Int> da = safe_dim(kb, pair.a), db = safe_dim(kb, pair.b);
        if (!da || !db) continue;
        const FactKey& lo = *da <= *db ? pair.a : pair.b;
        const FactKey& hi = *da <= *db ? pair.b : pair.a;
        Int dlo = std::min(*da, *db), dhi = std::max(*da, *db);
        BFState slo = fact_state(kb, lo), shi = fact_state(kb, hi);
        std::string link = lo.to_string() + " ~ " + hi.to_string();

        if (dlo == dhi) {
            if (shi != BFState::Unknown)
                out.push_back(fact_derivation(lo, shi, "transfer-equal",
                                              "equal dimensions over a common complement: " + link));
            if (slo != BFState::Unknown)
                out.push_back(fact_derivation(hi, slo, "transfer-equal",
                                              "equal dimensions over a common complement: " + link));
            continue;
        }
        if (shi == BFState::Zero)
            out.push_back(fact_derivation(lo, BFState::Zero, "transfer-zero",
                                          "the higher-dimensional side vanishes: " + link));
        if (is_nonzero(slo))
            out.push_back(fact_derivation(hi, BFState::Nonzero, "transfer-nonzero",
                                          "the lower-dimensional side is nonzero: " + link));
        if (condition_star(kb, hi) == Tri::True)
            out.push_back(fact_derivation(lo, BFState::Zero, "transfer-vanishing",
                                          "lower dimension under a torsion source: " + link));
        const ManifoldEntry* le = find_entry(kb, lo.manifold);
        const ManifoldEntry* he = find_entry(kb, hi.manifold);
        if (dhi == 3 && dlo == 1 && le && he && le->descriptor.b1 == 0 &&
            he->descriptor.b1 == 0 && le->descriptor.b2_plus >= 2 &&
            he->descriptor.b2_plus >= 2)
            out.push_back(fact_derivation(lo, BFState::Zero, "transfer-3-to-1",
                                          "the connecting map from dimension 3 to 1 is zero: " +
                                              link));
    }
}

void blowup_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& rel : kb.blowups) {
        const ManifoldEntry* be = find_entry(kb, rel.base);
        const ManifoldEntry* xe = find_entry(kb, rel.blown);
        if (!be || !xe) continue;
        if (xe->descriptor.rank() != be->descriptor.rank() + 1) continue;

        // facts downstairs propagate to the two dimension-preserving twists
        for (const auto& [key, fact] : kb.facts) {
            if (key.manifold != rel.base || fact.bf.state == BFState::Unknown) continue;
            for (Int ecoeff : {Int(1), Int(-1)}) {
                FactKey up = key;
                up.manifold = rel.blown;
                up.c1.push_back(ecoeff);
                out.push_back(fact_derivation(up, fact.bf.state, "blowup-copy",
                                              "invariant unchanged by a blowup twist with "
                                              "exceptional coefficient " +
                                                  std::to_string(ecoeff)));
            }
        }
        // facts upstairs
        for (const auto& [key, fact] : kb.facts) {
            if (key.manifold != rel.blown || key.c1.empty()) continue;
            Int ecoeff = key.c1.back();
            if (ecoeff % 2 == 0) continue;
            FactKey down = key;
            down.manifold = rel.base;
            down.c1.pop_back();
            if (ecoeff == 1 || ecoeff == -1) {
                if (fact.bf.state != BFState::Unknown)
                    out.push_back(fact_derivation(down, fact.bf.state, "blowup-copy",
                                                  "invariant unchanged by a blowup twist"));
            } else {
                if (is_nonzero(fact.bf.state))
                    out.push_back(fact_derivation(down, BFState::Nonzero, "blowup-nonzero",
                                                  "nonzero after blowup forces nonzero before"));
                if (fact_state(kb, down) == BFState::Zero)
                    out.push_back(fact_derivation(key, BFState::Zero, "blowup-base-zero",
                                                  "zero before blowup forces zero after"));
                if (condition_star(kb, down) == Tri::True)
                    out.push_back(fact_derivation(key, BFState::Zero, "blowup-vanishing",
                                                  "twist coefficient " + std::to_string(ecoeff) +
                                                      " with a torsion source vanishes"));
                if (be->descriptor.b2_plus >= 1 && be->descriptor.b1 == 0 &&
                    find_entry(kb, rel.base)->bf_blowup_simple == Tri::True)
                    out.push_back(fact_derivation(key, BFState::Zero, "blowup-simple-vanishing",
                                                  "blowup simple type excludes coefficient " +
                                                      std::to_string(ecoeff)));
            }
        }
    }
}

void homogeneous_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [name, e] : kb.manifolds) {
        if (!e.homogeneous_dim && e.descriptor.symplectic && e.descriptor.b2_plus >= 2) {
            Derivation d;
            d.flag_manifold = name;
            d.homogeneous_dim = 0;
            d.rule = "homogeneous-symplectic";
            d.because = "symplectic with b2+ >= 2";
            out.push_back(std::move(d));
        }
        if (!e.homogeneous_dim && e.descriptor.piece_count() >= 2) {
            Int total = e.descriptor.piece_count() - 1;
            bool ok = true;
            for (const auto& pname : e.descriptor.components) {
                const ManifoldEntry* pe = find_entry(kb, pname);
                if (!pe || !pe->homogeneous_dim || pe->descriptor.b2_plus < 1) {
                    ok = false;
                    break;
                }
                total += *pe->homogeneous_dim;
            }
            if (ok) {
                Derivation d;
                d.flag_manifold = name;
                d.homogeneous_dim = total;
                d.rule = "homogeneous-sum";
                d.because = "gluing of homogeneous pieces";
                out.push_back(std::move(d));
            }
        }
        if (e.homogeneous_dim) {
            for (const auto& [key, fact] : kb.facts) {
                if (key.manifold != name) continue;
                std::optional<Int> d = safe_dim(kb, key);
                if (d && *d != *e.homogeneous_dim)
                    out.push_back(fact_derivation(
                        key, BFState::Zero, "homogeneous-vanishing",
                        "homogeneous of dimension " + std::to_string(*e.homogeneous_dim) +
                            " but d = " + std::to_string(*d)));
            }
        }
    }
}

void simple_type_rules(const KnowledgeBase& kb, std::vector<Derivation>& out) {
    for (const auto& [name, e] : kb.manifolds) {
        const auto& x = e.descriptor;
        auto emit_simple = [&](const std::string& rule, const std::string& why) {
            if (e.bf_blowup_simple == Tri::True) return;
            Derivation d;
            d.flag_manifold = name;
            d.bf_blowup_simple = Tri::True;
            d.rule = rule;
            d.because = why;
            out.push_back(std::move(d));
        };
        if (x.symplectic && x.b2_plus - x.b1 > 1)
            emit_simple("simple-symplectic", "symplectic with b2+ - b1 > 1");
        for (const auto& s : e.surfaces) {
            Int sq = s.self_intersection(x);
            if (s.kind == SurfaceData::Kind::Embedded && s.genus > 1 && sq == 2 * s.genus - 2)
                emit_simple("simple-embedded",
                            "embedded genus-" + std::to_string(s.genus) +
                                " surface of self-intersection 2g - 2");
            if (s.kind == SurfaceData::Kind::ImmersedSphere && s.non_torsion &&
                s.positive_double_points >= 1 && sq == 2 * s.positive_double_points - 2 &&
                sq >= 0)
                emit_simple("simple-immersed",
                            "immersed sphere with self-intersection 2p - 2 >= 0");
        }
        if (x.piece_count() >= 2)
            for (const auto& pname : x.components) {
                const ManifoldEntry* pe = find_entry(kb, pname);
                if (pe && pe->bf_blowup_simple == Tri::True)
                    emit_simple("simple-summand", "connected summand " + pname + " is simple");
            }
        if (e.mod2_sw_simple != Tri::True && e.cup_products_even_or_torsion &&
            x.b2_plus - x.b1 > 1 && (x.b2_plus - x.b1) % 4 == 3) {
            Derivation d;
            d.flag_manifold = name;
            d.mod2_sw_simple = Tri::True;
            d.rule = "mod2-simple";
            d.because = "b2+ - b1 = 3 mod 4 with even/torsion H^1 cup products";
            out.push_back(std::move(d));
        }
    }
}

}  // namespace

std::vector<Derivation> candidate_derivations(const KnowledgeBase& kb) {
    std::vector<Derivation> out;
    forced_value_rules(kb, out);
    taubes_rule(kb, out);
    sw_bf_rules(kb, out);
    nonvan_rules(kb, out);
    sum_rules(kb, out);
    one_dim_rule(kb, out);
    transfer_rules(kb, out);
    blowup_rules(kb, out);
    homogeneous_rules(kb, out);
    simple_type_rules(kb, out);
    return out;
}

bool apply(KnowledgeBase& kb, const Derivation& d) {
    if (d.key) {
        const FactKey& key = *d.key;
        if (!find_entry(kb, key.manifold)) return false;
        Fact before;
        auto it = kb.facts.find(key);
        bool existed = it != kb.facts.end();
        if (existed) before = it->second;
        assert_fact(kb, key, d.state, d.sw,
                    "FACT " + key.to_string() + " = " + to_string(d.state) + " BY " + d.rule +
                        " FROM " + d.because);
        const Fact& after = kb.facts.at(key);
        return !existed || after.bf.state != before.bf.state || !(after.sw == before.sw);
    }
    if (d.flag_manifold) {
        auto it = kb.manifolds.find(*d.flag_manifold);
        if (it == kb.manifolds.end()) return false;
        ManifoldEntry& e = it->second;
        bool changed = false;
        if (d.homogeneous_dim && !e.homogeneous_dim) {
            e.homogeneous_dim = d.homogeneous_dim;
            changed = true;
        }
        if (d.bf_blowup_simple == Tri::True && e.bf_blowup_simple != Tri::True) {
            e.bf_blowup_simple = Tri::True;
            changed = true;
        }
        if (d.mod2_sw_simple == Tri::True && e.mod2_sw_simple != Tri::True) {
            e.mod2_sw_simple = Tri::True;
            changed = true;
        }
        return changed;
    }
    return false;
}

KnowledgeBase infer(KnowledgeBase kb) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& d : candidate_derivations(kb))
            if (apply(kb, d)) changed = true;
    }
    return kb;
}

BFDimension bf_dimension(const KnowledgeBase& kb, const std::string& manifold) {
    const ManifoldEntry* e = find_entry(kb, manifold);
    if (!e) return {};
    const auto& x = e->descriptor;
    if (x.b2_plus == 0 && x.b2_minus != 0) return {BFDimension::Kind::MinusInfinity, 0};
    if (x.b2_plus == 0 && x.b2_minus == 0) return {BFDimension::Kind::Exact, x.b1 - 1};
    if (x.b2_plus == 1 && x.b1 == 0) return {BFDimension::Kind::PlusInfinity, 0};

    Int lower = 0;
    if (x.piece_count() >= 2) {
        bool all_pos = true;
        for (const auto& pname : x.components) {
            const ManifoldEntry* pe = find_entry(kb, pname);
            if (!pe || pe->descriptor.b2_plus < 1) all_pos = false;
        }
        if (all_pos) lower = x.piece_count() - 1;
    }
    bool any_nonzero = false;
    std::optional<Int> min_nonzero;
    for (const auto& [key, fact] : kb.facts) {
        if (key.manifold != manifold || !is_nonzero(fact.bf.state)) continue;
        std::optional<Int> d = safe_dim(kb, key);
        if (!d) continue;
        any_nonzero = true;
        if (!min_nonzero || *d < *min_nonzero) min_nonzero = *d;
    }
    if (e->homogeneous_dim && any_nonzero) return {BFDimension::Kind::Exact, *e->homogeneous_dim};
    if (min_nonzero && *min_nonzero == lower) return {BFDimension::Kind::Exact, lower};
    return {BFDimension::Kind::BoundedBelow, lower};
}

std::string BFDimension::to_string() const {
    switch (kind) {
        case Kind::MinusInfinity: return "-inf";
        case Kind::PlusInfinity: return "+inf";
        case Kind::Exact: return std::to_string(value);
        case Kind::BoundedBelow: return ">= " + std::to_string(value) + " (unknown)";
        default: return "unknown";
    }
}

Verdict decomposition_verdict(const KnowledgeBase& kb, const std::vector<std::string>& x_pieces,
                              const std::vector<std::string>& xprime_pieces) {
    const Int k = static_cast<Int>(x_pieces.size());
    const Int l = static_cast<Int>(xprime_pieces.size());
    if (k < 1 || l < 1) throw PreconditionViolation("decomposition_verdict: empty decomposition");
    for (const auto& n : x_pieces)
        if (!find_entry(kb, n))
            throw PreconditionViolation("decomposition_verdict: unknown piece " + n);
    for (const auto& n : xprime_pieces)
        if (!find_entry(kb, n))
            throw PreconditionViolation("decomposition_verdict: unknown piece " + n);

    // hypotheses on the reference decomposition
    Int total_b2p = 0;
    bool hyp = k <= 4;
    bool x_hom = true;
    for (const auto& n : x_pieces) {
        const ManifoldEntry* pe = find_entry(kb, n);
        const auto& px = pe->descriptor;
        total_b2p += px.b2_plus;
        if (px.b1 != 0 || px.b2_plus % 4 != 3) hyp = false;
        // an odd SW invariant in dimension zero, either recorded or symplectic
        bool odd_sw = px.symplectic && px.b2_plus >= 2;
        for (const auto& [key, fact] : kb.facts) {
            if (key.manifold != n) continue;
            std::optional<Int> d = safe_dim(kb, key);
            if (d && *d == 0 && fact.sw.effective_parity() == SWFact::Parity::Odd) odd_sw = true;
        }
        if (!odd_sw) hyp = false;
        if (!is_homogeneous_zero(*pe)) x_hom = false;
    }
    if (k == 4 && total_b2p % 8 != 4) hyp = false;
    if (!hyp)
        return {VerdictKind::Unknown,
                "the reference decomposition does not establish the non-vanishing hypotheses"};

    for (const auto& n : xprime_pieces)
        if (find_entry(kb, n)->descriptor.b2_plus < 1)
            return {VerdictKind::Unknown, "candidate piece " + n + " has b2+ = 0"};
    if (l > k)
        return {VerdictKind::Obstructed,
                "k >= l fails: " + std::to_string(l) + " candidate pieces against " +
                    std::to_string(k)};
    for (const auto& n : xprime_pieces)
        if (find_entry(kb, n)->descriptor.b2_plus == 1)
            return {VerdictKind::Obstructed, "piece " + n + " has b2+ = 1; b2+ >= 2 is forced"};

    bool xp_hom = true;
    for (const auto& n : xprime_pieces)
        if (!is_homogeneous_zero(*find_entry(kb, n))) xp_hom = false;
    if (x_hom && xp_hom) {
        if (l != k)
            return {VerdictKind::Obstructed,
                    "k = l fails under 0-dimensional homogeneity: " + std::to_string(l) +
                        " != " + std::to_string(k)};
        for (const auto& n : xprime_pieces)
            if (find_entry(kb, n)->descriptor.b2_plus % 4 != 3)
                return {VerdictKind::Obstructed,
                        "piece " + n + " has b2+ != 3 mod 4, which is forced"};
        return {VerdictKind::Consistent,
                "k = l with every candidate piece satisfying b2+ = 3 mod 4"};
    }
    return {VerdictKind::Consistent, "no obstruction found"};
}

Verdict adjunction_verdict(KnowledgeBase& kb, const std::string& manifold,
                           const IntVector& k_class, const SurfaceData& surface) {
    const ManifoldEntry* e = find_entry(kb, manifold);
    if (!e) throw PreconditionViolation("adjunction_verdict: unknown manifold " + manifold);
    const auto& x = e->descriptor;
    const IntVector& alpha = surface.homology_class;
    if (alpha.size() != x.rank() || k_class.size() != x.rank())
        throw PreconditionViolation("adjunction_verdict: class rank mismatch");
    Int aa = surface.self_intersection(x);
    Int ka = (k_class.transpose() * x.intersection_form * alpha)(0, 0);

    auto exclude = [&](const std::string& why) -> Verdict {
        auto& status = kb.basic_classes[manifold][make_key(manifold, k_class).c1];
        if (status == ClassStatus::Confirmed)
            throw Inconsistent("adjunction excludes a confirmed basic class of " + manifold);
        status = ClassStatus::Excluded;
        return {VerdictKind::Obstructed, why};
    };

    if (surface.kind == SurfaceData::Kind::Embedded) {
        if (aa < 0)
            throw PreconditionViolation(
                "adjunction_verdict: embedded branch needs non-negative self-intersection");
        Int chi_minus = surface.genus > 0 ? 2 * surface.genus - 2 : 0;
        if (chi_minus < aa + std::abs(ka))
            return exclude("adjunction violated: chi_- < a.a + |a.K|; class excluded");
        return {VerdictKind::Consistent, "adjunction bound holds"};
    }

    Int bound = 2 * surface.positive_double_points - 2;
    if (std::abs(ka) + aa <= bound)
        return {VerdictKind::Consistent, "immersed adjunction bound holds"};
    if (e->bf_blowup_simple == Tri::True)
        return exclude("immersed adjunction violated under blowup simple type; class excluded");

    bool confirmed = false;
    auto bc = kb.basic_classes.find(manifold);
    if (bc != kb.basic_classes.end()) {
        auto it = bc->second.find(make_key(manifold, k_class).c1);
        if (it != bc->second.end() && it->second == ClassStatus::Confirmed) confirmed = true;
    }
    if (!confirmed && is_nonzero(fact_state(kb, make_key(manifold, k_class)))) confirmed = true;
    if (confirmed) {
        IntVector shifted = ka >= 0 ? IntVector(k_class + 2 * alpha) : IntVector(k_class - 2 * alpha);
        assert_fact(kb, make_key(manifold, shifted), BFState::Nonzero, std::nullopt,
                    "FACT " + make_key(manifold, shifted).to_string() +
                        " = Nonzero BY immersed-adjunction FROM bound violated by a basic class");
        return {VerdictKind::Consistent,
                "bound violated: derived a nonzero invariant at the shifted class"};
    }
    return {VerdictKind::Unknown, "bound violated but the class is not known basic"};
}

TypeVerdicts simple_type_verdict(const KnowledgeBase& kb, const std::string& manifold) {
    KnowledgeBase scratch = infer(kb);
    const ManifoldEntry* e = find_entry(scratch, manifold);
    TypeVerdicts v;
    if (!e) return v;
    v.bf_blowup_simple = e->bf_blowup_simple;
    v.mod2_sw_simple = e->mod2_sw_simple;
    v.homogeneous_dim = e->homogeneous_dim;
    for (const auto& [key, fact] : scratch.facts)
        if (key.manifold == manifold)
            for (const auto& p : fact.provenance) v.reasons.push_back(p);
    return v;
}

std::vector<IntVector> blowup_basic_classes(const std::vector<IntVector>& base, Int k) {
    if (k < 0) throw OutOfRange("blowup_basic_classes: k must be >= 0");
    std::vector<IntVector> out;
    for (const auto& b : base) {
        const Int total = Int(1) << k;
        for (Int mask = 0; mask < total; ++mask) {
            IntVector v(b.size() + k);
            v.head(b.size()) = b;
            for (Int i = 0; i < k; ++i) v(b.size() + i) = (mask >> i) & 1 ? 1 : -1;
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<LogBasicClass> basic_classes_log_transform(const KnowledgeBase& kb,
                                                       const std::string& manifold,
                                                       const SurfaceData& fishtail, Int p) {
    const ManifoldEntry* e = find_entry(kb, manifold);
    if (!e) throw PreconditionViolation("basic_classes_log_transform: unknown manifold");
    if (!e->descriptor.h1_no_2torsion)
        throw PreconditionViolation("basic_classes_log_transform: 2-torsion in H^1 not allowed");
    // validates the fishtail data and the h1 flag downstream
    fourman::log_transform(e->descriptor, fishtail, p);

    std::vector<LogBasicClass> out;
    auto bc = kb.basic_classes.find(manifold);
    if (bc == kb.basic_classes.end()) return out;
    for (const auto& [c1, status] : bc->second) {
        if (status != ClassStatus::Confirmed) continue;
        FactKey key;
        key.manifold = manifold;
        key.c1 = c1;
        BFState s = fact_state(kb, key);
        if (s == BFState::Unknown) s = BFState::Nonzero;
        for (Int k = 0; k < p; ++k) out.push_back({key_c1(key), 2 * k - (p - 1), s});
    }
    return out;
}

}  // namespace bft::engine
