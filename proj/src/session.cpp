#include "bft/session.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bft::session {

namespace {

using json = nlohmann::ordered_json;
using engine::BFState;
using engine::ClassStatus;
using engine::SWFact;
using engine::Tri;
using fourman::ManifoldDescriptor;
using fourman::SurfaceData;

std::string enc(Int v) { return std::to_string(v); }

Int dec(const json& j) {
    if (!j.is_string()) throw Error("session: expected a decimal string");
    return std::stoll(j.get<std::string>());
}

json enc_vec(const IntVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(enc(v(i)));
    return a;
}

IntVector dec_vec(const json& j) {
    IntVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = dec(j[static_cast<std::size_t>(i)]);
    return v;
}

json enc_mat(const IntMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(enc(m(r, c)));
        rows.push_back(std::move(row));
    }
    json out;
    out["rows"] = enc(m.rows());
    out["cols"] = enc(m.cols());
    out["entries"] = std::move(rows);
    return out;
}

IntMatrix dec_mat(const json& j) {
    IntMatrix m(dec(j.at("rows")), dec(j.at("cols")));
    const json& rows = j.at("entries");
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = dec(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    return m;
}

std::string enc_tri(Tri t) {
    return t == Tri::True ? "true" : t == Tri::False ? "false" : "unknown";
}

Tri dec_tri(const json& j) {
    std::string s = j.get<std::string>();
    if (s == "true") return Tri::True;
    if (s == "false") return Tri::False;
    return Tri::Unknown;
}

json enc_descriptor(const ManifoldDescriptor& x);
ManifoldDescriptor dec_descriptor(const json& j);

json enc_surface(const SurfaceData& s) {
    json j;
    j["kind"] = s.kind == SurfaceData::Kind::Embedded ? "embedded" : "immersed-sphere";
    j["class"] = enc_vec(s.homology_class);
    j["genus"] = enc(s.genus);
    j["positive_double_points"] = enc(s.positive_double_points);
    j["negative_double_points"] = enc(s.negative_double_points);
    j["non_torsion"] = s.non_torsion;
    return j;
}

SurfaceData dec_surface(const json& j) {
    SurfaceData s;
    s.kind = j.at("kind").get<std::string>() == "embedded" ? SurfaceData::Kind::Embedded
                                                           : SurfaceData::Kind::ImmersedSphere;
    s.homology_class = dec_vec(j.at("class"));
    s.genus = dec(j.at("genus"));
    s.positive_double_points = dec(j.at("positive_double_points"));
    s.negative_double_points = dec(j.at("negative_double_points"));
    s.non_torsion = j.at("non_torsion").get<bool>();
    return s;
}

json enc_descriptor(const ManifoldDescriptor& x) {
    json j;
    j["name"] = x.name;
    j["b1"] = enc(x.b1);
    j["b2_plus"] = enc(x.b2_plus);
    j["b2_minus"] = enc(x.b2_minus);
    j["intersection_form"] = enc_mat(x.intersection_form);
    j["h1_no_2torsion"] = x.h1_no_2torsion;
    j["symplectic"] = x.symplectic;
    json bd = json::array();
    for (const auto& b : x.boundary) {
        json e;
        e["label"] = b.label;
        e["swf_spherical"] = b.swf_spherical;
        e["rational_homology_sphere"] = b.rational_homology_sphere;
        bd.push_back(std::move(e));
    }
    j["boundary"] = std::move(bd);
    j["stored_chi"] = enc(x.stored_chi);
    j["components"] = x.components;
    json exc = json::array();
    for (auto i : x.exceptional) exc.push_back(enc(static_cast<Int>(i)));
    j["exceptional"] = std::move(exc);
    if (x.log_record) {
        json lr;
        lr["p"] = enc(x.log_record->p);
        lr["alpha"] = enc_vec(x.log_record->alpha);
        j["log_record"] = std::move(lr);
    }
    if (x.rbd_record) {
        json rr;
        rr["p"] = enc(x.rbd_record->p);
        rr["config"] = enc_mat(x.rbd_record->config);
        rr["complement"] = enc_mat(x.rbd_record->complement);
        if (x.rbd_record->upstream) rr["upstream"] = enc_descriptor(*x.rbd_record->upstream);
        j["rbd_record"] = std::move(rr);
    }
    return j;
}

ManifoldDescriptor dec_descriptor(const json& j) {
    ManifoldDescriptor x;
    x.name = j.at("name").get<std::string>();
    x.b1 = dec(j.at("b1"));
    x.b2_plus = dec(j.at("b2_plus"));
    x.b2_minus = dec(j.at("b2_minus"));
    x.intersection_form = dec_mat(j.at("intersection_form"));
    x.h1_no_2torsion = j.at("h1_no_2torsion").get<bool>();
    x.symplectic = j.at("symplectic").get<bool>();
    for (const auto& e : j.at("boundary")) {
        fourman::BoundaryComponent b;
        b.label = e.at("label").get<std::string>();
        b.swf_spherical = e.at("swf_spherical").get<bool>();
        b.rational_homology_sphere = e.at("rational_homology_sphere").get<bool>();
        x.boundary.push_back(std::move(b));
    }
    x.stored_chi = dec(j.at("stored_chi"));
    x.components = j.at("components").get<std::vector<std::string>>();
    for (const auto& e : j.at("exceptional"))
        x.exceptional.push_back(static_cast<Eigen::Index>(dec(e)));
    if (j.contains("log_record")) {
        fourman::LogRecord lr;
        lr.p = dec(j.at("log_record").at("p"));
        lr.alpha = dec_vec(j.at("log_record").at("alpha"));
        x.log_record = std::move(lr);
    }
    if (j.contains("rbd_record")) {
        fourman::RbdRecord rr;
        const json& src = j.at("rbd_record");
        rr.p = dec(src.at("p"));
        rr.config = dec_mat(src.at("config"));
        rr.complement = dec_mat(src.at("complement"));
        if (src.contains("upstream"))
            rr.upstream =
                std::make_shared<const ManifoldDescriptor>(dec_descriptor(src.at("upstream")));
        x.rbd_record = std::move(rr);
    }
    return x;
}

json enc_group(const abelian::FgAbGroup& g) {
    json j;
    j["free_rank"] = enc(g.free_rank);
    json t = json::array();
    for (Int d : g.torsion) t.push_back(enc(d));
    j["torsion"] = std::move(t);
    return j;
}

abelian::FgAbGroup dec_group(const json& j) {
    std::vector<Int> t;
    for (const auto& e : j.at("torsion")) t.push_back(dec(e));
    return abelian::FgAbGroup(dec(j.at("free_rank")), t);
}

std::string enc_parity(SWFact::Parity p) {
    return p == SWFact::Parity::Odd ? "odd" : p == SWFact::Parity::Even ? "even" : "unknown";
}

SWFact::Parity dec_parity(const json& j) {
    std::string s = j.get<std::string>();
    if (s == "odd") return SWFact::Parity::Odd;
    if (s == "even") return SWFact::Parity::Even;
    return SWFact::Parity::Unknown;
}

std::string enc_state(BFState s) { return engine::to_string(s); }

BFState dec_state(const json& j) {
    std::string s = j.get<std::string>();
    if (s == "Zero") return BFState::Zero;
    if (s == "Nonzero") return BFState::Nonzero;
    if (s == "NonzeroTorsion") return BFState::NonzeroTorsion;
    if (s == "NonzeroFree") return BFState::NonzeroFree;
    return BFState::Unknown;
}

json enc_c1(const std::vector<Int>& c1) {
    json a = json::array();
    for (Int v : c1) a.push_back(enc(v));
    return a;
}

std::vector<Int> dec_c1(const json& j) {
    std::vector<Int> v;
    for (const auto& e : j) v.push_back(dec(e));
    return v;
}

}  // namespace

std::string save(const Session& s) {
    json root;
    root["format"] = "bft-session";
    root["version"] = "1";

    json manifolds = json::array();
    for (const auto& [name, e] : s.kb.manifolds) {
        json m;
        m["descriptor"] = enc_descriptor(e.descriptor);
        if (e.canonical_class) m["canonical_class"] = enc_vec(*e.canonical_class);
        m["bf_blowup_simple"] = enc_tri(e.bf_blowup_simple);
        m["mod2_sw_simple"] = enc_tri(e.mod2_sw_simple);
        m["cup_products_even_or_torsion"] = e.cup_products_even_or_torsion;
        if (e.homogeneous_dim) m["homogeneous_dim"] = enc(*e.homogeneous_dim);
        json surfaces = json::array();
        for (const auto& sd : e.surfaces) surfaces.push_back(enc_surface(sd));
        m["surfaces"] = std::move(surfaces);
        manifolds.push_back(std::move(m));
    }
    root["manifolds"] = std::move(manifolds);

    json facts = json::array();
    for (const auto& [key, fact] : s.kb.facts) {
        json f;
        f["manifold"] = key.manifold;
        f["c1"] = enc_c1(key.c1);
        f["bf_state"] = enc_state(fact.bf.state);
        if (fact.bf.group) f["bf_group"] = enc_group(*fact.bf.group);
        if (fact.sw.value) f["sw_value"] = enc(*fact.sw.value);
        f["sw_parity"] = enc_parity(fact.sw.parity);
        f["provenance"] = fact.provenance;
        facts.push_back(std::move(f));
    }
    root["facts"] = std::move(facts);

    json pairs = json::array();
    for (const auto& p : s.kb.pairs) {
        json e;
        e["a_manifold"] = p.a.manifold;
        e["a_c1"] = enc_c1(p.a.c1);
        e["b_manifold"] = p.b.manifold;
        e["b_c1"] = enc_c1(p.b.c1);
        pairs.push_back(std::move(e));
    }
    root["complement_pairs"] = std::move(pairs);

    json blowups = json::array();
    for (const auto& b : s.kb.blowups) {
        json e;
        e["base"] = b.base;
        e["blown"] = b.blown;
        blowups.push_back(std::move(e));
    }
    root["blowups"] = std::move(blowups);

    json classes = json::array();
    for (const auto& [name, set] : s.kb.basic_classes) {
        json e;
        e["manifold"] = name;
        json list = json::array();
        for (const auto& [c1, status] : set) {
            json c;
            c["c1"] = enc_c1(c1);
            c["status"] = status == ClassStatus::Confirmed   ? "confirmed"
                          : status == ClassStatus::Excluded  ? "excluded"
                                                             : "unknown";
            list.push_back(std::move(c));
        }
        e["classes"] = std::move(list);
        classes.push_back(std::move(e));
    }
    root["basic_classes"] = std::move(classes);

    root["history"] = s.history;
    return root.dump(2) + "\n";
}

Session load(const std::string& text) {
    json root = json::parse(text);
    if (root.value("format", "") != "bft-session")
        throw Error("session: unrecognized file format");
    Session s;

    for (const auto& m : root.at("manifolds")) {
        engine::ManifoldEntry e;
        e.descriptor = dec_descriptor(m.at("descriptor"));
        if (m.contains("canonical_class")) e.canonical_class = dec_vec(m.at("canonical_class"));
        e.bf_blowup_simple = dec_tri(m.at("bf_blowup_simple"));
        e.mod2_sw_simple = dec_tri(m.at("mod2_sw_simple"));
        e.cup_products_even_or_torsion = m.at("cup_products_even_or_torsion").get<bool>();
        if (m.contains("homogeneous_dim")) e.homogeneous_dim = dec(m.at("homogeneous_dim"));
        for (const auto& sd : m.at("surfaces")) e.surfaces.push_back(dec_surface(sd));
        std::string name = e.descriptor.name;
        s.kb.manifolds.emplace(std::move(name), std::move(e));
    }
    for (const auto& f : root.at("facts")) {
        engine::FactKey key;
        key.manifold = f.at("manifold").get<std::string>();
        key.c1 = dec_c1(f.at("c1"));
        engine::Fact fact;
        fact.bf.state = dec_state(f.at("bf_state"));
        if (f.contains("bf_group")) fact.bf.group = dec_group(f.at("bf_group"));
        if (f.contains("sw_value")) fact.sw.value = dec(f.at("sw_value"));
        fact.sw.parity = dec_parity(f.at("sw_parity"));
        fact.provenance = f.at("provenance").get<std::vector<std::string>>();
        s.kb.facts.emplace(std::move(key), std::move(fact));
    }
    for (const auto& p : root.at("complement_pairs")) {
        engine::ComplementPair pair;
        pair.a.manifold = p.at("a_manifold").get<std::string>();
        pair.a.c1 = dec_c1(p.at("a_c1"));
        pair.b.manifold = p.at("b_manifold").get<std::string>();
        pair.b.c1 = dec_c1(p.at("b_c1"));
        s.kb.pairs.push_back(std::move(pair));
    }
    for (const auto& b : root.at("blowups"))
        s.kb.blowups.push_back(
            {b.at("base").get<std::string>(), b.at("blown").get<std::string>()});
    for (const auto& e : root.at("basic_classes")) {
        auto& set = s.kb.basic_classes[e.at("manifold").get<std::string>()];
        for (const auto& c : e.at("classes")) {
            std::string st = c.at("status").get<std::string>();
            set[dec_c1(c.at("c1"))] = st == "confirmed"  ? ClassStatus::Confirmed
                                      : st == "excluded" ? ClassStatus::Excluded
                                                         : ClassStatus::Unknown;
        }
    }
    s.history = root.at("history").get<std::vector<std::string>>();
    return s;
}

namespace {

struct LockedFd {
    int fd = -1;
    ~LockedFd() {
        if (fd >= 0) {
            flock(fd, LOCK_UN);
            close(fd);
        }
    }
};

}  // namespace

Session load_file(const std::string& path) {
    LockedFd lf;
    lf.fd = open(path.c_str(), O_RDONLY);
    if (lf.fd < 0) throw Error("session: cannot open " + path + ": " + std::strerror(errno));
    if (flock(lf.fd, LOCK_SH) != 0) throw Error("session: cannot lock " + path);
    std::ostringstream buf;
    char chunk[4096];
    ssize_t n;
    while ((n = read(lf.fd, chunk, sizeof chunk)) > 0) buf.write(chunk, n);
    return load(buf.str());
}

void save_file(const Session& s, const std::string& path) {
    LockedFd lf;
    lf.fd = open(path.c_str(), O_WRONLY | O_CREAT, 0644);
    if (lf.fd < 0) throw Error("session: cannot open " + path + ": " + std::strerror(errno));
    if (flock(lf.fd, LOCK_EX) != 0) throw Error("session: cannot lock " + path);
    std::string text = save(s);
    if (ftruncate(lf.fd, 0) != 0) throw Error("session: cannot truncate " + path);
    const char* p = text.data();
    std::size_t left = text.size();
    while (left > 0) {
        ssize_t n = write(lf.fd, p, left);
        if (n <= 0) throw Error("session: write failed for " + path);
        p += n;
        left -= static_cast<std::size_t>(n);
    }
}

}  // namespace bft::session
