#include "idslab/expcli.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace idslab {

namespace {

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object", where);
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where, it.key());
    }
}

std::array<int, 3> offset_from_json(const json& j) {
    std::array<int, 3> off{0, 0, 0};
    if (!j.is_array() || j.size() < 1 || j.size() > 3)
        throw ConfigError("offset must be an array of 1..3 integers", "offset");
    for (std::size_t i = 0; i < j.size(); ++i) off[i] = j[i].get<int>();
    return off;
}

json offset_to_json(const std::array<int, 3>& off) { return json::array({off[0], off[1], off[2]}); }

}  // namespace

const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::Ids: return "ids";
        case Experiment::Wegner: return "wegner";
        case Experiment::Ssf: return "ssf";
        case Experiment::Averaging: return "averaging";
        case Experiment::Percolation: return "percolation";
        case Experiment::Spencer: return "spencer";
        case Experiment::Toeplitz: return "toeplitz";
        case Experiment::AuditSuite: return "audit-suite";
    }
    return "?";
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json box_to_json(const BoxSpec& box) {
    return json{{"dim", box.dim},
                {"sides", box.sides},
                {"spacing", box.spacing},
                {"bc", to_string(box.bc)}};
}

BoxSpec box_from_json(const json& j) {
    require_keys(j, "box", {"dim", "sides", "spacing", "bc"});
    BoxSpec box;
    box.dim = j.at("dim").get<int>();
    box.sides = j.at("sides").get<std::vector<int>>();
    box.spacing = j.value("spacing", 1.0);
    box.bc = bc_from_string(j.value("bc", "dirichlet"));
    box.validate();
    return box;
}

json potential_to_json(const BoxSpec& box, const PotentialField& v) {
    json values = json::array();
    for (double x : v.values) values.push_back(x);
    return json{{"box", box_to_json(box)}, {"site_order", "first-axis-fastest"}, {"values", values}};
}

PotentialField potential_from_json(const json& j, BoxSpec* box_out) {
    require_keys(j, "potential", {"box", "site_order", "values"});
    BoxSpec box = box_from_json(j.at("box"));
    PotentialField v;
    v.values = j.at("values").get<std::vector<double>>();
    v.validate(box);
    if (box_out) *box_out = box;
    return v;
}

json hamiltonian_to_json(const HamiltonianMatrix& h) {
    json bands = json::array();
    for (int b = 0; b <= h.matrix.bandwidth(); ++b) {
        json band = json::array();
        for (int i = 0; i + b < h.matrix.dim(); ++i) band.push_back(h.matrix.band(b, i));
        bands.push_back(std::move(band));
    }
    return json{{"box", box_to_json(h.box)},
                {"bandwidth", h.matrix.bandwidth()},
                {"band_layout", "band b holds A(i, i+b)"},
                {"bands", bands},
                {"lower_bound", h.lower_bound}};
}

HamiltonianMatrix hamiltonian_from_json(const json& j) {
    require_keys(j, "hamiltonian", {"box", "bandwidth", "band_layout", "bands", "lower_bound"});
    HamiltonianMatrix h;
    h.box = box_from_json(j.at("box"));
    int bw = j.at("bandwidth").get<int>();
    SymBandMatrix m(h.box.site_count(), bw);
    const auto& bands = j.at("bands");
    for (int b = 0; b <= m.bandwidth(); ++b) {
        const auto& band = bands.at(b);
        for (int i = 0; i + b < m.dim(); ++i) m.band(b, i) = band.at(i).get<double>();
    }
    h.matrix = std::move(m);
    h.lower_bound = j.at("lower_bound").get<double>();
    return h;
}

json disorder_to_json(const DisorderSpec& d) {
    json j;
    switch (d.dist) {
        case DistClass::Uniform:
            j = {{"type", "uniform"}, {"a", d.uniform_a}, {"b", d.uniform_b}};
            break;
        case DistClass::Bernoulli:
            j = {{"type", "bernoulli"}, {"p", d.bernoulli_p}, {"qa", d.bernoulli_qa},
                 {"qb", d.bernoulli_qb}};
            break;
        case DistClass::Piecewise:
            j = {{"type", "piecewise"}, {"x", d.table.x}, {"f", d.table.f},
                 {"linear", d.table.linear}};
            break;
        case DistClass::Laplace:
            j = {{"type", "laplace"}, {"scale", d.laplace_scale}};
            break;
        case DistClass::LocallyContinuous: {
            json atoms = json::array();
            for (auto& [v, w] : d.atoms) atoms.push_back(json::array({v, w}));
            j = {{"type", "locally_continuous"}, {"omega_c", d.omega_c}, {"atoms", atoms},
                 {"x", d.upper_table.x}, {"f", d.upper_table.f}, {"linear", d.upper_table.linear}};
            break;
        }
    }
    switch (d.mask) {
        case MaskKind::Full: j["mask"] = "full"; break;
        case MaskKind::Sublattice: j["mask"] = "sublattice"; break;
        case MaskKind::Surface: j["mask"] = "surface"; break;
        case MaskKind::Explicit: j["mask"] = json{{"explicit", d.explicit_sites}}; break;
    }
    return j;
}

DisorderSpec disorder_from_json(const json& j) {
    require_keys(j, "disorder",
                 {"type", "a", "b", "p", "qa", "qb", "x", "f", "linear", "scale", "omega_c",
                  "atoms", "mask"});
    DisorderSpec d;
    std::string type = j.at("type").get<std::string>();
    if (type == "uniform") {
        d.dist = DistClass::Uniform;
        d.uniform_a = j.at("a").get<double>();
        d.uniform_b = j.at("b").get<double>();
    } else if (type == "bernoulli") {
        d.dist = DistClass::Bernoulli;
        d.bernoulli_p = j.at("p").get<double>();
        d.bernoulli_qa = j.value("qa", 1.0);
        d.bernoulli_qb = j.value("qb", 0.0);
    } else if (type == "piecewise") {
        d.dist = DistClass::Piecewise;
        d.table.x = j.at("x").get<std::vector<double>>();
        d.table.f = j.at("f").get<std::vector<double>>();
        d.table.linear = j.value("linear", false);
    } else if (type == "laplace") {
        d.dist = DistClass::Laplace;
        d.laplace_scale = j.at("scale").get<double>();
    } else if (type == "locally_continuous") {
        d.dist = DistClass::LocallyContinuous;
        d.omega_c = j.at("omega_c").get<double>();
        for (auto& a : j.at("atoms"))
            d.atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        d.upper_table.x = j.at("x").get<std::vector<double>>();
        d.upper_table.f = j.at("f").get<std::vector<double>>();
        d.upper_table.linear = j.value("linear", false);
    } else {
        throw ConfigError("unknown disorder type '" + type + "'", "type");
    }
    if (j.contains("mask")) {
        const auto& m = j.at("mask");
        if (m.is_string()) {
            std::string s = m.get<std::string>();
            if (s == "full")
                d.mask = MaskKind::Full;
            else if (s == "sublattice")
                d.mask = MaskKind::Sublattice;
            else if (s == "surface")
                d.mask = MaskKind::Surface;
            else
                throw ConfigError("unknown mask '" + s + "'", "mask");
        } else {
            require_keys(m, "mask", {"explicit"});
            d.mask = MaskKind::Explicit;
            d.explicit_sites = m.at("explicit").get<std::vector<int>>();
        }
    }
    d.validate();
    return d;
}

json profile_to_json(const SingleSiteProfile& p) {
    json terms = json::array();
    for (std::size_t i = 0; i < p.gamma.size(); ++i)
        terms.push_back(json{{"offset", offset_to_json(p.gamma[i])}, {"alpha", p.alpha[i]}});
    json w = json::array();
    for (std::size_t i = 0; i < p.w_offsets.size(); ++i)
        w.push_back(json{{"offset", offset_to_json(p.w_offsets[i])}, {"value", p.w_values[i]}});
    json j{{"terms", terms}, {"w", w}};
    if (p.tail_c && p.tail_m) j["tail"] = json{{"c", *p.tail_c}, {"m", *p.tail_m}};
    return j;
}

SingleSiteProfile profile_from_json(const json& j) {
    require_keys(j, "profile", {"terms", "w", "tail"});
    SingleSiteProfile p;
    for (auto& t : j.at("terms")) {
        require_keys(t, "profile.terms[]", {"offset", "alpha"});
        p.gamma.push_back(offset_from_json(t.at("offset")));
        p.alpha.push_back(t.at("alpha").get<double>());
    }
    if (j.contains("w")) {
        for (auto& t : j.at("w")) {
            require_keys(t, "profile.w[]", {"offset", "value"});
            p.w_offsets.push_back(offset_from_json(t.at("offset")));
            p.w_values.push_back(t.at("value").get<double>());
        }
    } else {
        p.w_offsets = {{0, 0, 0}};
        p.w_values = {1.0};
    }
    if (p.w_offsets.empty()) {
        p.w_offsets = {{0, 0, 0}};
        p.w_values = {1.0};
    }
    if (j.contains("tail")) {
        require_keys(j.at("tail"), "profile.tail", {"c", "m"});
        p.tail_c = j.at("tail").at("c").get<double>();
        p.tail_m = j.at("tail").at("m").get<double>();
    }
    p.validate();
    return p;
}

ExperimentConfig ExperimentConfig::parse(const json& doc) {
    require_keys(doc, "config",
                 {"experiment", "seed", "trials", "workers", "scales", "energies", "grid",
                  "model", "numeric_policy", "wegner", "percolation", "spencer", "toeplitz",
                  "averaging", "ssf", "audit"});
    ExperimentConfig cfg;
    std::string exp = doc.at("experiment").get<std::string>();
    if (exp == "ids") cfg.experiment = Experiment::Ids;
    else if (exp == "wegner") cfg.experiment = Experiment::Wegner;
    else if (exp == "ssf") cfg.experiment = Experiment::Ssf;
    else if (exp == "averaging") cfg.experiment = Experiment::Averaging;
    else if (exp == "percolation") cfg.experiment = Experiment::Percolation;
    else if (exp == "spencer") cfg.experiment = Experiment::Spencer;
    else if (exp == "toeplitz") cfg.experiment = Experiment::Toeplitz;
    else if (exp == "audit-suite") cfg.experiment = Experiment::AuditSuite;
    else throw ConfigError("unknown experiment '" + exp + "'", "experiment");

    cfg.seed = doc.value("seed", std::uint64_t{1});
    cfg.trials = doc.value("trials", 1);
    if (cfg.trials < 0) throw ConfigError("trials must be non-negative", "trials");
    cfg.workers = doc.value("workers", 0);
    if (doc.contains("scales")) cfg.scales = doc.at("scales").get<std::vector<int>>();
    if (doc.contains("energies")) cfg.energies = doc.at("energies").get<std::vector<double>>();
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        require_keys(g, "grid", {"min", "max", "points", "offset"});
        double lo = g.at("min").get<double>(), hi = g.at("max").get<double>();
        int n = g.at("points").get<int>();
        double off = g.value("offset", 0.0);
        if (n < 2 || !(hi > lo)) throw ConfigError("bad grid", "grid");
        for (int i = 0; i < n; ++i)
            cfg.energies.push_back(lo + off + (hi - lo) * i / (n - 1));
    }
    if (doc.contains("model")) {
        const auto& m = doc.at("model");
        require_keys(m, "model", {"box", "disorder", "profile", "vper"});
        cfg.model.box = box_from_json(m.at("box"));
        if (m.contains("disorder")) cfg.model.disorder = disorder_from_json(m.at("disorder"));
        if (m.contains("profile")) cfg.model.profile = profile_from_json(m.at("profile"));
        if (m.contains("vper")) {
            require_keys(m.at("vper"), "model.vper", {"cell", "sides"});
            cfg.model.vper_cell = m.at("vper").at("cell").get<std::vector<double>>();
            cfg.model.vper_sides = m.at("vper").at("sides").get<std::vector<int>>();
        }
    }
    if (doc.contains("numeric_policy")) {
        const auto& p = doc.at("numeric_policy");
        require_keys(p, "numeric_policy",
                     {"eig_rel_tol", "residual_rel_tol", "degeneracy_rel_tol", "dense_cap"});
        cfg.policy.eig_rel_tol = p.value("eig_rel_tol", cfg.policy.eig_rel_tol);
        cfg.policy.residual_rel_tol = p.value("residual_rel_tol", cfg.policy.residual_rel_tol);
        cfg.policy.degeneracy_rel_tol = p.value("degeneracy_rel_tol", cfg.policy.degeneracy_rel_tol);
        cfg.policy.dense_cap = p.value("dense_cap", cfg.policy.dense_cap);
    }
    for (const char* block : {"wegner", "percolation", "spencer", "toeplitz", "averaging", "ssf",
                              "audit"})
        if (doc.contains(block)) cfg.extra[block] = doc.at(block);

    cfg.canonical = doc;
    cfg.fingerprint = fnv1a_hex(doc.dump());
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    json doc = json::parse(in);
    return parse(doc);
}

json RunManifest::to_json() const {
    json checks = json::object();
    for (auto& [k, v] : checksums) checks[k] = v;
    return json{{"fingerprint", fingerprint},
                {"version", version},
                {"wall_ms", wall_ms},
                {"checksums", checks}};
}

}  // namespace idslab
