#include "idslab/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace idslab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> Philox::block(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kPhiloxM0, c[0], hi0, lo0);
        mul_hi_lo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
    }
    return c;
}

double Philox::uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t site,
                         std::uint32_t draw) {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(site), static_cast<std::uint32_t>(site >> 32),
        static_cast<std::uint32_t>(trial),
        static_cast<std::uint32_t>(trial >> 32) ^ (draw << 24)};
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                        static_cast<std::uint32_t>(seed >> 32)};
    auto out = block(ctr, key);
    std::uint64_t bits =
        (static_cast<std::uint64_t>(out[draw % 2 ? 2 : 0]) << 32) | out[draw % 2 ? 3 : 1];
    // (k + 1/2) * 2^-53 stays strictly inside (0,1)
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void DensityTable::validate(double expected_mass) const {
    if (x.size() < 2) throw std::invalid_argument("DensityTable: need at least one interval");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("DensityTable: breakpoints not ascending");
    std::size_t want = linear ? x.size() : x.size() - 1;
    if (f.size() != want) throw std::invalid_argument("DensityTable: value count mismatch");
    for (double v : f)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("DensityTable: negative or non-finite density");
    if (std::abs(mass() - expected_mass) > 1e-12)
        throw std::invalid_argument("DensityTable: density does not integrate to required mass");
}

double DensityTable::mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double len = x[i + 1] - x[i];
        m += linear ? 0.5 * (f[i] + f[i + 1]) * len : f[i] * len;
    }
    return m;
}

double DensityTable::pdf(double t) const {
    if (t < x.front() || t > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = std::min<std::size_t>(x.size() - 2, std::max<std::ptrdiff_t>(0, it - x.begin() - 1));
    if (!linear) return f[i];
    double s = (t - x[i]) / (x[i + 1] - x[i]);
    return f[i] + s * (f[i + 1] - f[i]);
}

double DensityTable::cdf(double t) const {
    if (t <= x.front()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double hi = std::min(t, x[i + 1]);
        if (hi <= x[i]) break;
        double len = hi - x[i];
        if (!linear) {
            acc += f[i] * len;
        } else {
            double slope = (f[i + 1] - f[i]) / (x[i + 1] - x[i]);
            acc += f[i] * len + 0.5 * slope * len * len;
        }
        if (t <= x[i + 1]) break;
    }
    return acc;
}

double DensityTable::quantile(double u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double len = x[i + 1] - x[i];
        double piece = linear ? 0.5 * (f[i] + f[i + 1]) * len : f[i] * len;
        if (u <= acc + piece || i + 2 == x.size()) {
            double r = u - acc;
            if (piece <= 0.0) return x[i + 1];
            if (!linear) return x[i] + r / f[i];
            double slope = (f[i + 1] - f[i]) / len;
            if (std::abs(slope) < 1e-300) return x[i] + r / f[i];
            // solve f_i s + slope s^2/2 = r for s in [0, len]
            double disc = f[i] * f[i] + 2.0 * slope * r;
            double s = (-f[i] + std::sqrt(std::max(0.0, disc))) / slope;
            return x[i] + std::clamp(s, 0.0, len);
        }
        acc += piece;
    }
    return x.back();
}

double DensityTable::sup_norm() const {
    double m = 0.0;
    for (double v : f) m = std::max(m, v);
    return m;
}

double DensityTable::total_variation() const {
    double tv = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        tv += std::abs(f[i] - prev);
        prev = f[i];
    }
    tv += std::abs(prev);
    return tv;
}

double DensityTable::deriv_l1() const {
    if (!linear) throw std::invalid_argument("deriv_l1: step density is not W^{1,1}");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) s += std::abs(f[i + 1] - f[i]);
    return s;
}

DensityTable DensityTable::uniform(double a, double b) {
    DensityTable t;
    t.x = {a, b};
    t.f = {1.0 / (b - a)};
    return t;
}

void DisorderSpec::validate() const {
    switch (dist) {
        case DistClass::Uniform:
            if (!(uniform_b >= uniform_a)) throw std::invalid_argument("Uniform: b < a");
            break;
        case DistClass::Bernoulli:
            if (!(bernoulli_p >= 0.0 && bernoulli_p <= 1.0))
                throw std::invalid_argument("Bernoulli: p outside [0,1]");
            break;
        case DistClass::Piecewise:
            table.validate(1.0);
            break;
        case DistClass::Laplace:
            if (!(laplace_scale > 0.0)) throw std::invalid_argument("Laplace: scale <= 0");
            break;
        case DistClass::LocallyContinuous: {
            double w = 0.0;
            for (auto& [v, p] : atoms) {
                if (p < 0.0) throw std::invalid_argument("LocallyContinuous: negative weight");
                if (v > omega_c)
                    throw std::invalid_argument("LocallyContinuous: atom above omega_c");
                w += p;
            }
            upper_table.validate(1.0 - w);
            if (upper_table.x.front() < omega_c)
                throw std::invalid_argument("LocallyContinuous: density below omega_c");
            break;
        }
    }
}

double DisorderSpec::quantile(double u) const {
    switch (dist) {
        case DistClass::Uniform:
            return uniform_a + (uniform_b - uniform_a) * u;
        case DistClass::Bernoulli:
            return u < bernoulli_p ? bernoulli_qa : bernoulli_qb;
        case DistClass::Piecewise:
            return table.quantile(u);
        case DistClass::Laplace:
            return u < 0.5 ? laplace_scale * std::log(2.0 * u)
                           : -laplace_scale * std::log(2.0 * (1.0 - u));
        case DistClass::LocallyContinuous: {
            double acc = 0.0;
            for (auto& [v, p] : atoms) {
                acc += p;
                if (u < acc) return v;
            }
            return upper_table.quantile(u - acc);
        }
    }
    throw std::logic_error("unreachable");
}

double DisorderSpec::sup_density() const {
    switch (dist) {
        case DistClass::Uniform:
            return uniform_b > uniform_a ? 1.0 / (uniform_b - uniform_a)
                                         : std::numeric_limits<double>::infinity();
        case DistClass::Bernoulli:
            return std::numeric_limits<double>::infinity();
        case DistClass::Piecewise:
            return table.sup_norm();
        case DistClass::Laplace:
            return 0.5 / laplace_scale;
        case DistClass::LocallyContinuous:
            return atoms.empty() ? upper_table.sup_norm()
                                 : std::numeric_limits<double>::infinity();
    }
    throw std::logic_error("unreachable");
}

double DisorderSpec::support_min() const {
    switch (dist) {
        case DistClass::Uniform: return uniform_a;
        case DistClass::Bernoulli: return std::min(bernoulli_qa, bernoulli_qb);
        case DistClass::Piecewise: return table.x.front();
        case DistClass::Laplace: return -std::numeric_limits<double>::infinity();
        case DistClass::LocallyContinuous: {
            double m = upper_table.x.front();
            for (auto& [v, p] : atoms)
                if (p > 0.0) m = std::min(m, v);
            return m;
        }
    }
    throw std::logic_error("unreachable");
}

double DisorderSpec::support_max() const {
    switch (dist) {
        case DistClass::Uniform: return uniform_b;
        case DistClass::Bernoulli: return std::max(bernoulli_qa, bernoulli_qb);
        case DistClass::Piecewise: return table.x.back();
        case DistClass::Laplace: return std::numeric_limits<double>::infinity();
        case DistClass::LocallyContinuous: return upper_table.x.back();
    }
    throw std::logic_error("unreachable");
}

bool DisorderSpec::mask_contains(const BoxSpec& box, int site) const {
    switch (mask) {
        case MaskKind::Full:
            return true;
        case MaskKind::Sublattice: {
            auto c = box.coord_of(site);
            for (int j = 0; j < box.dim; ++j)
                if (c[j] % 2 != 0) return false;
            return true;
        }
        case MaskKind::Surface: {
            // the hyperplane {x_0 = s0/2}, the paper's {0} x Z^{d-1} centred in the box
            auto c = box.coord_of(site);
            return c[0] == box.sides[0] / 2;
        }
        case MaskKind::Explicit:
            return std::binary_search(explicit_sites.begin(), explicit_sites.end(), site);
    }
    return false;
}

CouplingField sample_couplings(const DisorderSpec& spec, const BoxSpec& box,
                               std::uint64_t master_seed, std::uint64_t trial_index) {
    spec.validate();
    box.validate();
    CouplingField out;
    out.master_seed = master_seed;
    out.trial_index = trial_index;
    out.values.assign(box.site_count(), 0.0);
    for (int s = 0; s < box.site_count(); ++s) {
        if (!spec.mask_contains(box, s)) continue;
        double v = spec.quantile(Philox::uniform01(master_seed, trial_index, s));
        if (!std::isfinite(v)) throw std::runtime_error("sample_couplings: non-finite coupling");
        out.values[s] = v;
    }
    return out;
}

void SingleSiteProfile::validate() const {
    if (gamma.empty()) throw std::invalid_argument("SingleSiteProfile: empty support");
    if (gamma.size() != alpha.size())
        throw std::invalid_argument("SingleSiteProfile: gamma/alpha mismatch");
    if (w_offsets.size() != w_values.size())
        throw std::invalid_argument("SingleSiteProfile: w mismatch");
    if (w_offsets.empty()) throw std::invalid_argument("SingleSiteProfile: empty base profile");
}

double SingleSiteProfile::alpha_zero() const {
    for (std::size_t i = 0; i < gamma.size(); ++i)
        if (gamma[i] == std::array<int, 3>{0, 0, 0}) return alpha[i];
    return 0.0;
}

double SingleSiteProfile::alpha_star() const {
    double s = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i)
        if (!(gamma[i] == std::array<int, 3>{0, 0, 0})) s += std::abs(alpha[i]);
    return s;
}

std::vector<std::pair<std::array<int, 3>, double>> SingleSiteProfile::effective_terms() const {
    validate();
    std::vector<std::pair<std::array<int, 3>, double>> terms;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        for (std::size_t j = 0; j < w_offsets.size(); ++j) {
            std::array<int, 3> off = {gamma[i][0] + w_offsets[j][0],
                                      gamma[i][1] + w_offsets[j][1],
                                      gamma[i][2] + w_offsets[j][2]};
            double v = alpha[i] * w_values[j];
            auto it = std::find_if(terms.begin(), terms.end(),
                                   [&](const auto& t) { return t.first == off; });
            if (it == terms.end())
                terms.emplace_back(off, v);
            else
                it->second += v;
        }
    }
    return terms;
}

SingleSiteProfile SingleSiteProfile::delta() {
    SingleSiteProfile p;
    p.gamma = {{0, 0, 0}};
    p.alpha = {1.0};
    p.w_offsets = {{0, 0, 0}};
    p.w_values = {1.0};
    return p;
}

SingleSiteProfile SingleSiteProfile::from_terms(
    const std::vector<std::pair<std::array<int, 3>, double>>& alpha_terms) {
    SingleSiteProfile p;
    for (auto& [off, val] : alpha_terms) {
        p.gamma.push_back(off);
        p.alpha.push_back(val);
    }
    p.w_offsets = {{0, 0, 0}};
    p.w_values = {1.0};
    return p;
}

PotentialField assemble_alloy_potential(const CouplingField& couplings,
                                        const SingleSiteProfile& profile, const BoxSpec& box) {
    box.validate();
    profile.validate();
    if (static_cast<int>(couplings.values.size()) != box.site_count())
        throw std::invalid_argument("assemble_alloy_potential: coupling/box mismatch");
    auto terms = profile.effective_terms();
    PotentialField v;
    v.values.assign(box.site_count(), 0.0);
    for (int k = 0; k < box.site_count(); ++k) {
        double om = couplings.values[k];
        if (om == 0.0) continue;
        if (!std::isfinite(om))
            throw std::invalid_argument("assemble_alloy_potential: non-finite coupling");
        auto c = box.coord_of(k);
        for (auto& [off, uval] : terms) {
            std::array<int, 3> t = {c[0] + off[0], c[1] + off[1], c[2] + off[2]};
            if (box.bc == Bc::Periodic) {
                for (int j = 0; j < box.dim; ++j)
                    t[j] = ((t[j] % box.sides[j]) + box.sides[j]) % box.sides[j];
            } else if (!box.contains(t)) {
                continue;  // truncated at the boundary
            }
            v.values[box.index_of(t)] += om * uval;
        }
    }
    return v;
}

ActiveSiteSet percolation_cluster(const BoxSpec& box, double p, std::uint64_t master_seed,
                                  std::uint64_t trial_index) {
    box.validate();
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percolation_cluster: p outside [0,1]");
    const int n = box.site_count();
    ActiveSiteSet out;
    out.box = box;
    out.active.assign(n, false);
    for (int s = 0; s < n; ++s)
        out.active[s] = Philox::uniform01(master_seed, trial_index, s) < p;

    // BFS from boundary-touching active sites through active neighbours
    std::vector<bool> reached(n, false);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s) {
        if (!out.active[s]) continue;
        auto c = box.coord_of(s);
        bool boundary = false;
        for (int j = 0; j < box.dim && !boundary; ++j)
            boundary = (c[j] == 0 || c[j] == box.sides[j] - 1);
        if (boundary) {
            reached[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        auto c = box.coord_of(s);
        for (int j = 0; j < box.dim; ++j) {
            for (int dir : {+1, -1}) {
                auto nb = c;
                nb[j] += dir;
                if (!box.contains(nb)) continue;
                int t = box.index_of(nb);
                if (out.active[t] && !reached[t]) {
                    reached[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    for (int s = 0; s < n; ++s)
        if (reached[s]) out.retained.push_back(s);
    return out;
}

double holder_modulus(const DisorderSpec& spec, double eps) {
    if (eps < 0.0) throw std::invalid_argument("holder_modulus: eps < 0");
    spec.validate();
    switch (spec.dist) {
        case DistClass::Uniform: {
            double w = spec.uniform_b - spec.uniform_a;
            if (w == 0.0) return 1.0;
            return std::min(1.0, eps / w);
        }
        case DistClass::Laplace:
            // the window centred at the origin is optimal
            return 1.0 - std::exp(-eps / (2.0 * spec.laplace_scale));
        case DistClass::Bernoulli: {
            double pa = spec.bernoulli_p, pb = 1.0 - spec.bernoulli_p;
            if (std::abs(spec.bernoulli_qa - spec.bernoulli_qb) <= eps) return 1.0;
            return std::max(pa, pb);
        }
        case DistClass::Piecewise:
        case DistClass::LocallyContinuous: {
            // measure of the closed window [a, a+eps]
            std::vector<std::pair<double, double>> atoms;
            const DensityTable* tab = nullptr;
            if (spec.dist == DistClass::Piecewise) {
                tab = &spec.table;
            } else {
                atoms = spec.atoms;
                tab = &spec.upper_table;
            }
            auto window = [&](double a) {
                double m = tab->cdf(a + eps) - tab->cdf(a);
                for (auto& [v, pw] : atoms)
                    if (v >= a && v <= a + eps) m += pw;
                return m;
            };
            std::vector<double> cand;
            for (double bp : tab->x) {
                cand.push_back(bp);
                cand.push_back(bp - eps);
            }
            for (auto& [v, pw] : atoms) {
                cand.push_back(v);
                cand.push_back(v - eps);
            }
            // stationary windows of a linear density: f(a) = f(a+eps)
            if (tab->linear && eps > 0.0) {
                for (std::size_t i = 0; i + 1 < tab->x.size(); ++i)
                    for (std::size_t j = 0; j + 1 < tab->x.size(); ++j) {
                        double si = (tab->f[i + 1] - tab->f[i]) / (tab->x[i + 1] - tab->x[i]);
                        double sj = (tab->f[j + 1] - tab->f[j]) / (tab->x[j + 1] - tab->x[j]);
                        if (std::abs(si - sj) < 1e-300) continue;
                        double ai = tab->f[i] - si * tab->x[i];
                        double aj = tab->f[j] - sj * tab->x[j];
                        double a = (aj + sj * eps - ai) / (si - sj);
                        if (a >= tab->x[i] && a <= tab->x[i + 1] && a + eps >= tab->x[j] &&
                            a + eps <= tab->x[j + 1])
                            cand.push_back(a);
                    }
            }
            double best = 0.0;
            for (double a : cand) best = std::max(best, window(a));
            return best;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace idslab
