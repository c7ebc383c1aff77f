#include "idslab/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "idslab/averaging.hpp"
#include "idslab/ids.hpp"
#include "idslab/parallel.hpp"
#include "idslab/ssf.hpp"
#include "idslab/toeplitz.hpp"
#include "idslab/wegner.hpp"

namespace idslab {

namespace {

class ArtifactWriter {
  public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << content;
        checksums_[name] = fnv1a_hex(content);
    }

    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    const std::map<std::string, std::string>& checksums() const { return checksums_; }

  private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> checksums_;
};

std::string table_csv(const EnsembleTable& t) {
    std::ostringstream os;
    os << "energy,mean,variance,trials\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i)
        os << format_g17(t.grid[i]) << ',' << format_g17(t.mean[i]) << ','
           << format_g17(t.variance[i]) << ',' << t.trials << '\n';
    return os.str();
}

json table_sidecar(const EnsembleTable& t, const ExperimentConfig& cfg) {
    return json{{"seed", t.master_seed},
                {"fingerprint", cfg.fingerprint},
                {"scale", t.scale},
                {"trials", t.trials}};
}

const json& block(const ExperimentConfig& cfg, const char* name) {
    if (!cfg.extra.contains(name))
        throw ConfigError(std::string("missing '") + name + "' block", name);
    return cfg.extra.at(name);
}

// deterministic standard normal from the philox stream
double philox_normal(std::uint64_t seed, std::uint64_t trial, std::uint64_t site) {
    double u1 = Philox::uniform01(seed, trial, site, 0);
    double u2 = Philox::uniform01(seed, trial, site, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DMatrix random_symmetric(int n, std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) {
    DMatrix m(n, n);
    std::uint64_t s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = philox_normal(seed, trial, (tag << 32) | s++);
            m(i, j) = m(j, i) = v;
        }
    return m;
}

DMatrix random_low_rank(int n, int rank, std::uint64_t seed, std::uint64_t trial,
                        std::uint64_t tag) {
    DMatrix m(n, n);
    std::uint64_t s = 0;
    for (int r = 0; r < rank; ++r) {
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) u[i] = philox_normal(seed, trial, (tag << 32) | s++);
        double c = philox_normal(seed, trial, (tag << 32) | s++);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += c * u[i] * u[j] / n;
    }
    return m;
}

void run_ids(const ExperimentConfig& cfg, ArtifactWriter& w, int workers) {
    if (cfg.scales.empty() || cfg.energies.empty())
        throw ConfigError("ids experiment needs scales and a grid", "scales");
    auto res = ids_ensemble(cfg.model, cfg.scales, cfg.trials, cfg.energies, cfg.seed, workers,
                            cfg.policy);
    for (auto& t : res.per_scale) {
        std::string base = "ids_l" + std::to_string(t.scale);
        auto tt = t;
        tt.fingerprint = cfg.fingerprint;
        w.write(base + ".csv", table_csv(tt));
        w.write_json(base + ".json", table_sidecar(tt, cfg));
    }
    std::ostringstream os;
    os << "energy,localized_trace\n";
    for (std::size_t i = 0; i < cfg.energies.size(); ++i)
        os << format_g17(cfg.energies[i]) << ',' << format_g17(res.localized_trace[i]) << '\n';
    w.write("localized_trace.csv", os.str());
    w.write_json("localized_trace.json",
                 json{{"side", res.localized_side}, {"fingerprint", cfg.fingerprint}});
}

void run_wegner(const ExperimentConfig& cfg, ArtifactWriter& w, int workers) {
    const auto& b = block(cfg, "wegner");
    double energy = b.at("energy").get<double>();
    auto eps = b.at("eps").get<std::vector<double>>();
    auto rep = wegner_scaling(cfg.model, energy, eps, cfg.scales, cfg.trials, cfg.seed, workers,
                              cfg.policy);
    std::ostringstream os;
    os << "epsilon,scale,mean_trace,stderr\n";
    for (auto& c : rep.cells)
        os << format_g17(c.eps) << ',' << c.scale << ',' << format_g17(c.mean_trace) << ','
           << format_g17(c.stderr_trace) << '\n';
    w.write("wegner_cells.csv", os.str());
    w.write_json("wegner_fit.json",
                 json{{"a", rep.a},
                      {"a_ci", 1.96 * rep.a_stderr},
                      {"b", rep.b},
                      {"b_ci", 1.96 * rep.b_stderr},
                      {"C_W_hat", rep.c_w_hat},
                      {"C_ref", std::isfinite(rep.c_ref) ? json(rep.c_ref) : json("inf")},
                      {"residual_rms", rep.residual_rms},
                      {"degenerate", rep.degenerate},
                      {"energy", energy},
                      {"fingerprint", cfg.fingerprint}});
}

void run_ssf(const ExperimentConfig& cfg, ArtifactWriter& w, int workers) {
    const auto& b = block(cfg, "ssf");
    int pairs = b.value("pairs", 200);
    int dim = b.value("dim", 30);
    int max_rank = b.value("max_rank", 5);
    auto verdicts = parallel_map<json>(pairs, workers, [&](int t) {
        int n = 2 + static_cast<int>(Philox::uniform01(cfg.seed, t, 900) * (dim - 1));
        int rank = 1 + static_cast<int>(Philox::uniform01(cfg.seed, t, 901) * max_rank);
        rank = std::min(rank, n);
        auto a = random_symmetric(n, cfg.seed, t, 1);
        auto p = random_low_rank(n, rank, cfg.seed, t, 2);
        auto v = ssf_bounds_audit(a, a + p);
        auto k = krein_audit(a, a + p, [](double x) { return x * x; });
        auto conv = optssf_audit(a, a + p, [&] {
            auto d = dense_symmetric_eigen(a + p - a, true);
            DMatrix absd(n, n);
            for (int i = 0; i < n; ++i)
                for (int jj = 0; jj < n; ++jj) {
                    double s = 0.0;
                    for (int kk = 0; kk < n; ++kk)
                        s += d.vectors(i, kk) * std::abs(d.values[kk]) * d.vectors(jj, kk);
                    absd(i, jj) = s;
                }
            return absd;
        }(), [](double x) { return x * x; });
        return json{{"n", n},
                    {"rank", v.rank},
                    {"rank_ok", v.rank_bound_ok},
                    {"l1_ok", v.l1_bound_ok},
                    {"lp_ok", v.lp_bounds_ok},
                    {"convex_ok", conv.ok},
                    {"krein_disc", k.discrepancy}};
    });
    int violations = 0;
    double worst_krein = 0.0;
    for (auto& v : verdicts) {
        if (!(v.at("rank_ok").get<bool>() && v.at("l1_ok").get<bool>() &&
              v.at("lp_ok").get<bool>() && v.at("convex_ok").get<bool>()))
            ++violations;
        worst_krein = std::max(worst_krein, v.at("krein_disc").get<double>());
    }
    w.write_json("ssf_suite.json", json{{"pairs", pairs},
                                        {"violations", violations},
                                        {"worst_krein_discrepancy", worst_krein},
                                        {"fingerprint", cfg.fingerprint}});
    // one example table for golden-file diffs
    auto a = random_symmetric(6, cfg.seed, 0, 1);
    auto p = random_low_rank(6, 2, cfg.seed, 0, 2);
    auto table = ssf(a, a + p);
    std::ostringstream os;
    os << "lambda_lo,lambda_hi,xi\n";
    for (std::size_t i = 0; i < table.xi.size(); ++i)
        os << format_g17(table.breakpoints[i]) << ',' << format_g17(table.breakpoints[i + 1])
           << ',' << table.xi[i] << '\n';
    w.write("ssf_table.csv", os.str());
}

void run_averaging(const ExperimentConfig& cfg, ArtifactWriter& w, int workers) {
    const auto& b = block(cfg, "averaging");
    int configs = b.value("configs", 50);
    int dim = b.value("dim", 12);
    double t = b.value("t", 1.0);
    QuadratureSpec quad;
    quad.truncation_z = b.value("z_max", 40.0);
    quad.nodes = b.value("nodes", 256);
    auto rows = parallel_map<json>(configs, workers, [&](int c) {
        int n = std::max(2, dim);
        auto h = random_symmetric(n, cfg.seed, c, 11);
        auto g = random_symmetric(n, cfg.seed, c, 12);
        DMatrix wmat = g * g.transposed();  // W >= 0
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) wmat(i, j) /= n;
        DMatrix jmat(n, n);
        // J = projector-scaled root with J^2 <= W: take J = W / (lam_max+1)
        auto weig = dense_symmetric_eigen(wmat, true);
        double lmax = weig.values.back();
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += weig.vectors(i, k) * (weig.values[k] / (lmax + 1.0)) * weig.vectors(jj, k);
                jmat(i, jj) = s;
            }
        std::vector<double> phi(n, 0.0);
        for (int i = 0; i < n; ++i) phi[i] = philox_normal(cfg.seed, c, 7000 + i);
        double nm = norm2(phi);
        for (auto& x : phi) x /= nm;
        cplx z(2.0 * Philox::uniform01(cfg.seed, c, 8000) - 1.0,
               -0.1 - Philox::uniform01(cfg.seed, c, 8001));
        auto rv = resolvent_average(h, wmat, jmat, z, t, quad, phi);

        DensityTable rho = DensityTable::uniform(0.0, 1.0);
        double e1 = -1.0 + 2.0 * Philox::uniform01(cfg.seed, c, 8002);
        double e2 = e1 + Philox::uniform01(cfg.seed, c, 8003);
        auto pv = projection_average(h, wmat, jmat, e1, e2, rho, quad, phi);
        return json{{"resolvent_abs", std::abs(rv.value)},
                    {"resolvent_ok", rv.ok},
                    {"resolvent_tail", rv.tail_bound},
                    {"projection_value", pv.value.real()},
                    {"projection_bound", pv.bound},
                    {"projection_ok", pv.ok}};
    });
    int violations = 0;
    for (auto& r : rows)
        if (!(r.at("resolvent_ok").get<bool>() && r.at("projection_ok").get<bool>())) ++violations;
    std::ostringstream os;
    os << "config,resolvent_abs,resolvent_ok,projection_value,projection_bound,projection_ok\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        os << i << ',' << format_g17(rows[i].at("resolvent_abs").get<double>()) << ','
           << rows[i].at("resolvent_ok").get<bool>() << ','
           << format_g17(rows[i].at("projection_value").get<double>()) << ','
           << format_g17(rows[i].at("projection_bound").get<double>()) << ','
           << rows[i].at("projection_ok").get<bool>() << '\n';
    w.write("averaging.csv", os.str());
    w.write_json("averaging.json", json{{"configs", configs},
                                        {"violations", violations},
                                        {"fingerprint", cfg.fingerprint}});
}

void run_percolation(const ExperimentConfig& cfg, ArtifactWriter& w, int workers) {
    const auto& b = block(cfg, "percolation");
    double p = b.at("p").get<double>();
    double thr = b.value("jump_threshold", 0.01);
    auto res = percolation_ids(cfg.model.box, p, cfg.scales, cfg.trials, cfg.energies, cfg.seed,
                               thr, workers, cfg.policy);
    json jumps = json::array();
    for (std::size_t s = 0; s < res.per_scale.size(); ++s) {
        auto t = res.per_scale[s];
        t.fingerprint = cfg.fingerprint;
        std::string base = "percolation_l" + std::to_string(t.scale);
        w.write(base + ".csv", table_csv(t));
        w.write_json(base + ".json", table_sidecar(t, cfg));
        json jl = json::array();
        for (auto& [e, size] : res.jumps[s].jumps) jl.push_back(json::array({e, size}));
        jumps.push_back(json{{"scale", t.scale},
                             {"jumps", jl},
                             {"grid_adequate", res.jumps[s].grid_adequate}});
    }
    w.write_json("percolation_jumps.json", json{{"p", p},
                                                {"threshold", thr},
                                                {"per_scale", jumps},
                                                {"empty_clusters", res.empty_clusters},
                                                {"fingerprint", cfg.fingerprint}});
}

void run_spencer(const ExperimentConfig& cfg, ArtifactWriter& w, int /*workers*/) {
    const auto& b = block(cfg, "spencer");
    double depth = b.at("depth").get<double>();
    int width = b.at("width").get<int>();
    auto rhos = b.at("rhos").get<std::vector<int>>();
    std::string mode_s = b.value("mode", "symmetric");
    WellMode mode = mode_s == "detuned" ? WellMode::Detuned : WellMode::Symmetric;
    double detune = b.value("detune", 0.0);
    std::ostringstream os;
    os << "rho,splitting,amp_product,sigma_distance\n";
    for (int rho : rhos) {
        auto rep = spencer_double_well(depth, width, rho, mode, detune, cfg.policy);
        os << rho << ',' << format_g17(rep.splitting) << ',' << format_g17(rep.amp_product_ground)
           << ',' << format_g17(rep.sigma_distance) << '\n';
    }
    w.write("spencer.csv", os.str());
    w.write_json("spencer.json", json{{"depth", depth},
                                      {"width", width},
                                      {"mode", mode_s},
                                      {"detune", detune},
                                      {"fingerprint", cfg.fingerprint}});
}

void run_toeplitz(const ExperimentConfig& cfg, ArtifactWriter& w, int /*workers*/) {
    const auto& b = block(cfg, "toeplitz");
    std::vector<std::pair<std::array<int, 3>, double>> alpha;
    for (auto& t : b.at("alpha")) {
        std::array<int, 3> off{0, 0, 0};
        auto ov = t.at("offset");
        for (std::size_t i = 0; i < ov.size() && i < 3; ++i) off[i] = ov[i].get<int>();
        alpha.emplace_back(off, t.at("value").get<double>());
    }
    auto sizes = b.value("sizes", std::vector<int>{64, 256, 1024});

    auto sym = symbol_analysis(alpha, cfg.model.box.dim);
    {
        std::ostringstream os;
        os << "theta,re_s,im_s,abs_s\n";
        const int n = 1024;
        for (int k = 0; k <= n; ++k) {
            double theta = -std::numbers::pi + 2.0 * std::numbers::pi * k / n;
            cplx s = 0.0;
            for (auto& [off, val] : alpha)
                s += val * std::exp(cplx(0.0, off[0] * theta));
            os << format_g17(theta) << ',' << format_g17(s.real()) << ',' << format_g17(s.imag())
               << ',' << format_g17(std::abs(s)) << '\n';
        }
        w.write("toeplitz_symbol.csv", os.str());
    }
    json rows = json::array();
    for (int n : sizes) {
        BoxSpec box = cfg.model.box;
        for (auto& s : box.sides) s = n;
        auto op = toeplitz_matrix(alpha, box);
        auto v = inverse_rowsum(op);
        rows.push_back(json{{"size", n},
                            {"row_sum_norm", v.row_sum_norm},
                            {"normalized_norm", v.normalized_norm},
                            {"bound", v.bound},
                            {"ok", v.ok}});
    }
    w.write_json("toeplitz_rowsum.json",
                 json{{"sizes", rows},
                      {"symbol_min_certified", sym.certified_min},
                      {"winding", sym.has_winding ? json(sym.winding) : json()},
                      {"fingerprint", cfg.fingerprint}});
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& outdir,
                         int workers) {
    auto t0 = std::chrono::steady_clock::now();
    ArtifactWriter w(outdir);
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (cfg.workers > 0) workers = cfg.workers;

    switch (cfg.experiment) {
        case Experiment::Ids: run_ids(cfg, w, workers); break;
        case Experiment::Wegner: run_wegner(cfg, w, workers); break;
        case Experiment::Ssf: run_ssf(cfg, w, workers); break;
        case Experiment::Averaging: run_averaging(cfg, w, workers); break;
        case Experiment::Percolation: run_percolation(cfg, w, workers); break;
        case Experiment::Spencer: run_spencer(cfg, w, workers); break;
        case Experiment::Toeplitz: run_toeplitz(cfg, w, workers); break;
        case Experiment::AuditSuite: {
            double budget = 20.0;
            if (cfg.extra.contains("audit"))
                budget = cfg.extra.at("audit").value("budget", budget);
            auto res = audit_suite(cfg.seed, budget);
            w.write_json("audit_report.json", audit_report_json(res));
            break;
        }
    }

    RunResult out;
    out.outdir = outdir;
    out.manifest.fingerprint = cfg.fingerprint;
    out.manifest.version = kVersion;
    out.manifest.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.manifest.checksums = w.checksums();
    {
        std::ofstream mf(outdir / "manifest.json", std::ios::binary);
        mf << out.manifest.to_json().dump(2) << "\n";
    }
    return out;
}

namespace {

#ifdef IDSLAB_FAULT_INJECT
constexpr bool kFaultInjectBuild = true;
#else
constexpr bool kFaultInjectBuild = false;
#endif

template <typename Fn>
AuditEntry run_suite(const std::string& name, double budget_s, Fn&& trial_fn) {
    AuditEntry e;
    e.name = name;
    auto t0 = std::chrono::steady_clock::now();
    int t = 0;
    while (true) {
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (t > 0 && elapsed >= budget_s) break;
        if (t >= 4000) break;
        std::string repro = trial_fn(t);
        if (!repro.empty()) {
            ++e.violations;
            if (e.repro.empty()) e.repro = repro;
        }
        ++t;
    }
    e.trials = t;
    return e;
}

}  // namespace

AuditResult audit_suite(std::uint64_t seed, double budget_seconds, bool inject_fault) {
    AuditResult res;
    if (budget_seconds <= 0.0) {
        res.skipped = true;
        return res;
    }
    const bool fault = inject_fault || kFaultInjectBuild;
    const double share = budget_seconds / 5.0;

    res.entries.push_back(run_suite("bracketing", share, [&](int t) -> std::string {
        AlloyModel model;
        int d = 1 + (t % 2);
        int l = 4 + 2 * (t % 3);
        model.box = BoxSpec{d, std::vector<int>(d, l), 1.0, Bc::Dirichlet};
        model.disorder.dist = DistClass::Uniform;
        model.disorder.uniform_a = 0.0;
        model.disorder.uniform_b = 1.0;
        int axis = t % d;
        int split = 1 + (t % (l - 1));
        auto rep = bracketing_audit(model, model.box, axis, split, seed, t);
        int v = rep.total_violations();
        if (fault) v += (t == 0);  // deliberate harness self-test failure
        if (v > 0)
            return json{{"suite", "bracketing"}, {"d", d}, {"l", l}, {"axis", axis},
                        {"split", split}, {"seed", seed}, {"trial", t}}.dump();
        return {};
    }));

    res.entries.push_back(run_suite("ssf-bounds", share, [&](int t) -> std::string {
        int n = 5 + (t % 26);
        int rank = 1 + (t % 5);
        auto a = random_symmetric(n, seed, t, 21);
        auto p = random_low_rank(n, rank, seed, t, 22);
        auto v = ssf_bounds_audit(a, a + p);
        bool ok = v.rank_bound_ok && v.l1_bound_ok && v.lp_bounds_ok;
        // antisymmetry and chain rule, exact on counting differences
        auto t1 = ssf(a, a + p);
        auto t2 = ssf(a + p, a);
        for (std::size_t i = 0; i < t1.xi.size() && ok; ++i) {
            double mid = 0.5 * (t1.breakpoints[i] + t1.breakpoints[i + 1]);
            if (t2.value_at(mid) != -t1.xi[i]) ok = false;
        }
        if (!ok)
            return json{{"suite", "ssf-bounds"}, {"n", n}, {"rank", rank}, {"seed", seed},
                        {"trial", t}}.dump();
        return {};
    }));

    res.entries.push_back(run_suite("spectral-averaging", share, [&](int t) -> std::string {
        int n = 6 + (t % 6);
        auto h = random_symmetric(n, seed, t, 31);
        auto g = random_symmetric(n, seed, t, 32);
        DMatrix wmat = g * g.transposed();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) wmat(i, j) /= n;
        auto weig = dense_symmetric_eigen(wmat, true);
        DMatrix jmat(n, n);
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += weig.vectors(i, k) * (weig.values[k] / (weig.values.back() + 1.0)) *
                         weig.vectors(jj, k);
                jmat(i, jj) = s;
            }
        std::vector<double> phi(n);
        for (int i = 0; i < n; ++i) phi[i] = philox_normal(seed, t, 7100 + i);
        double nm = norm2(phi);
        for (auto& x : phi) x /= nm;
        QuadratureSpec quad;
        quad.nodes = 128;
        cplx z(2.0 * Philox::uniform01(seed, t, 8100) - 1.0, -0.2);
        auto rv = resolvent_average(h, wmat, jmat, z, 1.0, quad, phi);
        DensityTable rho = DensityTable::uniform(0.0, 1.0);
        double e1 = -1.0 + 2.0 * Philox::uniform01(seed, t, 8101);
        auto pv = projection_average(h, wmat, jmat, e1, e1 + 0.5, rho, quad, phi);
        if (!rv.ok || !pv.ok)
            return json{{"suite", "spectral-averaging"}, {"n", n}, {"seed", seed}, {"trial", t}}
                .dump();
        return {};
    }));

    res.entries.push_back(run_suite("toeplitz-rowsum", share, [&](int t) -> std::string {
        int n = 32 + 16 * (t % 8);
        double a1 = -0.9 + 1.8 * Philox::uniform01(seed, t, 9100);
        double a2 = -0.9 + 1.8 * Philox::uniform01(seed, t, 9101);
        double scale = std::abs(a1) + std::abs(a2) + 0.05 + Philox::uniform01(seed, t, 9102);
        std::vector<std::pair<std::array<int, 3>, double>> alpha{
            {{0, 0, 0}, scale}, {{1, 0, 0}, a1}, {{-1, 0, 0}, a2}};
        BoxSpec box{1, {n}, 1.0, Bc::Dirichlet};
        auto op = toeplitz_matrix(alpha, box);
        auto v = inverse_rowsum(op);
        if (!v.ok)
            return json{{"suite", "toeplitz-rowsum"}, {"n", n}, {"alpha0", scale}, {"a1", a1},
                        {"a2", a2}, {"seed", seed}, {"trial", t}}.dump();
        return {};
    }));

    res.entries.push_back(run_suite("interlacing", share, [&](int t) -> std::string {
        int n = 8 + (t % 24);
        int rank = 1 + (t % 4);
        auto h = random_symmetric(n, seed, t, 41);
        auto p = random_low_rank(n, rank, seed, t, 42);
        auto v = interlacing_audit(h, p);
        if (!v.chains_ok)
            return json{{"suite", "interlacing"}, {"n", n}, {"rank", rank}, {"seed", seed},
                        {"trial", t}}.dump();
        return {};
    }));

    return res;
}

std::string audit_report_text(const AuditResult& result) {
    std::ostringstream os;
    if (result.skipped) {
        os << "audit: skipped (zero budget)\n";
        return os.str();
    }
    for (auto& e : result.entries) {
        os << (e.violations == 0 ? "[PASS] " : "[FAIL] ") << e.name << ": " << e.trials
           << " trials, " << e.violations << " violations";
        if (!e.repro.empty()) os << "\n       repro: " << e.repro;
        os << '\n';
    }
    os << (result.passed() ? "audit: all suites passed\n" : "audit: violations detected\n");
    return os.str();
}

json audit_report_json(const AuditResult& result) {
    json entries = json::array();
    for (auto& e : result.entries)
        entries.push_back(json{{"name", e.name},
                               {"trials", e.trials},
                               {"violations", e.violations},
                               {"repro", e.repro}});
    return json{{"skipped", result.skipped}, {"passed", result.passed()}, {"suites", entries}};
}

}  // namespace idslab
