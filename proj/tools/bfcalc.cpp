// bfcalc: stable-cohomotopy groups of small cell complexes and a
// knowledge-base front end for the four-manifold invariant calculus.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bft/cells.hpp"
#include "bft/cohomotopy.hpp"
#include "bft/engine.hpp"
#include "bft/session.hpp"

namespace {

using namespace bft;

constexpr int kExitAnswered = 0;
constexpr int kExitObstructed = 2;
constexpr int kExitInconsistent = 3;
constexpr int kExitUsage = 64;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Int> parse_int_list(const std::string& s) {
    std::vector<Int> out;
    if (s.empty()) return out;
    for (const auto& tok : split(s, ',')) out.push_back(std::stoll(tok));
    return out;
}

IntVector to_vec(const std::vector<Int>& v) {
    IntVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

// Cell list grammar: "S8,e10:eta,e12:eta@10+3nu@8". The first token is the
// bottom sphere; each later cell may carry attaching components
// "[coeff]gen[@dim]" joined by '+', the target defaulting to the previous
// cell. Generators: iota, eta, eta2, nu.
cells::StableComplex parse_complex(const std::string& text) {
    std::vector<cells::Cell> cs;
    for (const auto& tok : split(text, ',')) {
        if (tok.empty()) throw Error("empty cell token");
        if (cs.empty()) {
            if (tok[0] != 'S') throw Error("the first cell must be a sphere, e.g. S8");
            cs.push_back({std::stoll(tok.substr(1)), {}});
            continue;
        }
        if (tok[0] != 'e') throw Error("later cells must look like e10[:attach]");
        std::string body = tok.substr(1);
        auto colon = body.find(':');
        cells::Cell cell;
        cell.dimension = std::stoll(colon == std::string::npos ? body : body.substr(0, colon));
        if (colon != std::string::npos) {
            for (const auto& comp : split(body.substr(colon + 1), '+')) {
                std::size_t i = 0;
                while (i < comp.size() && (std::isdigit(comp[i]) || comp[i] == '-')) ++i;
                Int coeff = i == 0 ? 1 : std::stoll(comp.substr(0, i));
                std::string rest = comp.substr(i);
                auto at = rest.find('@');
                std::string gen = at == std::string::npos ? rest : rest.substr(0, at);
                Int degree;
                if (gen == "iota") degree = 0;
                else if (gen == "eta") degree = 1;
                else if (gen == "eta2") degree = 2;
                else if (gen == "nu") degree = 3;
                else throw Error("unknown stem generator: " + gen);
                std::size_t target = cs.size() - 1;
                if (at != std::string::npos) {
                    Int dim = std::stoll(rest.substr(at + 1));
                    bool found = false;
                    for (std::size_t t = 0; t < cs.size(); ++t)
                        if (cs[t].dimension == dim) {
                            target = t;
                            found = true;
                        }
                    if (!found) throw Error("no earlier cell of dimension " + std::to_string(dim));
                }
                cell.attaching.push_back({target, stems::StemElement(degree, coeff)});
            }
        }
        cs.push_back(std::move(cell));
    }
    return cells::StableComplex(std::move(cs));
}

void seed_catalog(engine::KnowledgeBase& kb) {
    engine::add_manifold(kb, catalog::s4());
    engine::add_manifold(kb, catalog::cp2());
    engine::add_manifold(kb, catalog::cp2_bar());
    engine::add_manifold(kb, catalog::s2xs2());
    fourman::ManifoldDescriptor k3 = catalog::k3();
    IntVector canonical = IntVector::Zero(k3.rank());
    engine::add_manifold(kb, std::move(k3), canonical);
    engine::SWFact sw;
    sw.value = 1;
    sw.parity = engine::SWFact::Parity::Odd;
    engine::assert_fact(kb, engine::make_key("K3", canonical), engine::BFState::Unknown, sw,
                        "external input: canonical-class SW = 1 axiom");
}

engine::BFState parse_state(const std::string& s) {
    if (s == "Zero") return engine::BFState::Zero;
    if (s == "Nonzero") return engine::BFState::Nonzero;
    if (s == "NonzeroTorsion") return engine::BFState::NonzeroTorsion;
    if (s == "NonzeroFree") return engine::BFState::NonzeroFree;
    if (s == "Unknown") return engine::BFState::Unknown;
    throw Error("unknown state: " + s);
}

engine::FactKey make_fact_key(const engine::KnowledgeBase& kb, const std::string& manifold,
                              const std::string& c1_text) {
    auto it = kb.manifolds.find(manifold);
    if (it == kb.manifolds.end()) throw Error("unknown manifold: " + manifold);
    if (c1_text == "zero")
        return engine::make_key(manifold, IntVector::Zero(it->second.descriptor.rank()));
    engine::FactKey key;
    key.manifold = manifold;
    key.c1 = parse_int_list(c1_text);
    return key;
}

int run(int argc, char** argv) {
    CLI::App app{"stable-cohomotopy and four-manifold invariant calculator"};
    app.require_subcommand(1);

    // group
    auto* group = app.add_subcommand("group", "compute a stable cohomotopy group");
    group->require_subcommand(1);
    Int n = 0, j = 0, m = 0;
    bool audit = false;
    std::string cells_text;

    auto* cp = group->add_subcommand("cp", "group of a complex projective space");
    cp->add_option("--n", n)->required();
    cp->add_option("--j", j)->required();
    cp->add_flag("--audit", audit);

    auto* cplx = group->add_subcommand("complex", "group of an explicit cell complex");
    cplx->add_option("--cells", cells_text)->required();
    cplx->add_option("--m", m)->required();
    cplx->add_flag("--audit", audit);

    // kb
    auto* kbcmd = app.add_subcommand("kb", "knowledge-base operations");
    kbcmd->require_subcommand(1);
    std::string session_path, manifold, c1_text = "zero", state_text = "Unknown";
    std::string sw_parity, x_list, xprime_list, k_text, kind_text = "embedded", class_text;
    std::optional<Int> sw_value;
    Int genus = 0, pdp = 0, sum_m = 0;
    bool no_catalog = false;

    auto add_session = [&](CLI::App* c) { c->add_option("--session", session_path)->required(); };

    auto* init = kbcmd->add_subcommand("init", "create a session file");
    add_session(init);
    init->add_flag("--no-catalog", no_catalog, "do not seed the manifold catalog");

    auto* addsum = kbcmd->add_subcommand("add-k3-sum", "add the connected sum of m copies of K3");
    add_session(addsum);
    addsum->add_option("--m", sum_m)->required();

    auto* asrt = kbcmd->add_subcommand("assert", "merge a fact into the base");
    add_session(asrt);
    asrt->add_option("--manifold", manifold)->required();
    asrt->add_option("--c1", c1_text);
    asrt->add_option("--state", state_text);
    asrt->add_option("--sw-parity", sw_parity);
    Int sw_value_raw = 0;
    auto* swv = asrt->add_option("--sw-value", sw_value_raw);

    auto* infer = kbcmd->add_subcommand("infer", "run inference to the fixed point");
    add_session(infer);

    auto* query = kbcmd->add_subcommand("query", "query a fact after inference");
    add_session(query);
    query->add_option("--manifold", manifold)->required();
    query->add_option("--c1", c1_text);

    auto* decomp = kbcmd->add_subcommand("check-decomposition", "compare two decompositions");
    add_session(decomp);
    decomp->add_option("--x", x_list)->required();
    decomp->add_option("--xprime", xprime_list)->required();

    auto* adj = kbcmd->add_subcommand("check-adjunction", "adjunction check of a basic class");
    add_session(adj);
    adj->add_option("--manifold", manifold)->required();
    adj->add_option("--k", k_text)->required();
    adj->add_option("--kind", kind_text, "embedded | immersed");
    adj->add_option("--class", class_text)->required();
    adj->add_option("--genus", genus);
    adj->add_option("--double-points", pdp);

    auto* type = kbcmd->add_subcommand("check-type", "simple-type and homogeneity verdicts");
    add_session(type);
    type->add_option("--manifold", manifold)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (cp->parsed()) {
            abelian::FgAbGroup g = cohomotopy::cp_cohomotopy(n, j);
            if (audit) {
                cohomotopy::HurewiczData h = cohomotopy::hurewicz_table(n, j);
                std::cout << "hurewicz kernel = " << h.kernel.to_string()
                          << ", cokernel = " << h.cokernel.to_string() << "\n";
            }
            std::cout << g.to_string() << "\n";
            return kExitAnswered;
        }
        if (cplx->parsed()) {
            cohomotopy::CohomotopyResult res =
                cohomotopy::complex_cohomotopy(parse_complex(cells_text), m);
            if (audit)
                for (const auto& line : res.derivation) std::cout << "# " << line << "\n";
            if (res.ambiguous) {
                std::cout << "ambiguous:";
                for (const auto& g : res.candidates) std::cout << " " << g.to_string();
                std::cout << "\n";
            } else {
                std::cout << res.group.to_string() << "\n";
            }
            return kExitAnswered;
        }

        if (init->parsed()) {
            session::Session s;
            if (!no_catalog) seed_catalog(s.kb);
            s.history.push_back("init");
            session::save_file(s, session_path);
            std::cout << "session created: " << session_path << "\n";
            return kExitAnswered;
        }

        session::Session s = session::load_file(session_path);

        if (addsum->parsed()) {
            if (s.kb.manifolds.find("K3") == s.kb.manifolds.end())
                throw Error("catalog manifold K3 missing from the session");
            engine::add_manifold(s.kb, catalog::k3_sum(sum_m));
            s.history.push_back("add-k3-sum m=" + std::to_string(sum_m));
            session::save_file(s, session_path);
            std::cout << "added " << catalog::k3_sum(sum_m).name << "\n";
            return kExitAnswered;
        }
        if (asrt->parsed()) {
            engine::FactKey key = make_fact_key(s.kb, manifold, c1_text);
            std::optional<engine::SWFact> sw;
            if (!sw_parity.empty() || swv->count()) {
                engine::SWFact f;
                if (swv->count()) f.value = sw_value_raw;
                if (sw_parity == "odd") f.parity = engine::SWFact::Parity::Odd;
                else if (sw_parity == "even") f.parity = engine::SWFact::Parity::Even;
                sw = f;
            }
            engine::assert_fact(s.kb, key, parse_state(state_text), sw, "asserted by user");
            s.history.push_back("assert " + key.to_string() + " = " + state_text);
            session::save_file(s, session_path);
            std::cout << "FACT " << key.to_string() << " = "
                      << engine::to_string(s.kb.facts.at(key).bf.state) << " BY assertion\n";
            return kExitAnswered;
        }
        if (infer->parsed()) {
            std::size_t before = s.kb.facts.size();
            s.kb = engine::infer(std::move(s.kb));
            s.history.push_back("infer");
            session::save_file(s, session_path);
            for (const auto& [key, fact] : s.kb.facts)
                for (const auto& p : fact.provenance) std::cout << p << "\n";
            std::cout << "facts: " << before << " -> " << s.kb.facts.size() << "\n";
            return kExitAnswered;
        }
        if (query->parsed()) {
            engine::FactKey key = make_fact_key(s.kb, manifold, c1_text);
            engine::KnowledgeBase scratch = s.kb;
            engine::assert_fact(scratch, key, engine::BFState::Unknown, std::nullopt,
                                "queried");
            engine::KnowledgeBase closed = engine::infer(scratch);
            auto it = closed.facts.find(key);
            if (it == closed.facts.end() || it->second.bf.state == engine::BFState::Unknown) {
                std::cout << "FACT " << key.to_string() << " = Unknown\n";
                return kExitAnswered;
            }
            if (it->second.provenance.empty())
                std::cout << "FACT " << key.to_string() << " = "
                          << engine::to_string(it->second.bf.state) << " BY assertion\n";
            else
                std::cout << it->second.provenance.back() << "\n";
            return kExitAnswered;
        }
        if (decomp->parsed()) {
            engine::Verdict v =
                engine::decomposition_verdict(s.kb, split(x_list, ','), split(xprime_list, ','));
            switch (v.kind) {
                case engine::VerdictKind::Consistent:
                    std::cout << "Consistent: " << v.reason << "\n";
                    return kExitAnswered;
                case engine::VerdictKind::Obstructed:
                    std::cout << "Obstructed: " << v.reason << "\n";
                    return kExitObstructed;
                default:
                    std::cout << "Unknown: " << v.reason << "\n";
                    return kExitAnswered;
            }
        }
        if (adj->parsed()) {
            fourman::SurfaceData surf;
            surf.kind = kind_text == "immersed" ? fourman::SurfaceData::Kind::ImmersedSphere
                                                : fourman::SurfaceData::Kind::Embedded;
            surf.homology_class = to_vec(parse_int_list(class_text));
            surf.genus = genus;
            surf.positive_double_points = pdp;
            engine::Verdict v = engine::adjunction_verdict(s.kb, manifold,
                                                           to_vec(parse_int_list(k_text)), surf);
            session::save_file(s, session_path);
            switch (v.kind) {
                case engine::VerdictKind::Consistent:
                    std::cout << "Consistent: " << v.reason << "\n";
                    return kExitAnswered;
                case engine::VerdictKind::Obstructed:
                    std::cout << "Obstructed: " << v.reason << "\n";
                    return kExitObstructed;
                default:
                    std::cout << "Unknown: " << v.reason << "\n";
                    return kExitAnswered;
            }
        }
        if (type->parsed()) {
            engine::TypeVerdicts v = engine::simple_type_verdict(s.kb, manifold);
            auto tri = [](engine::Tri t) {
                return t == engine::Tri::True ? "True"
                       : t == engine::Tri::False ? "False"
                                                 : "Unknown";
            };
            std::cout << "bf_blowup_simple: " << tri(v.bf_blowup_simple) << "\n";
            std::cout << "mod2_sw_simple: " << tri(v.mod2_sw_simple) << "\n";
            std::cout << "homogeneous_dim: "
                      << (v.homogeneous_dim ? std::to_string(*v.homogeneous_dim) : "Unknown")
                      << "\n";
            return kExitAnswered;
        }
    } catch (const Inconsistent& e) {
        std::cerr << "Inconsistent: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
