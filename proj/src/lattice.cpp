#include "idslab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace idslab {

const char* to_string(Bc bc) {
    switch (bc) {
        case Bc::Dirichlet: return "dirichlet";
        case Bc::Neumann: return "neumann";
        case Bc::Periodic: return "periodic";
        case Bc::DirichletDecoupled: return "dirichlet_decoupled";
    }
    return "?";
}

Bc bc_from_string(const std::string& s) {
    if (s == "dirichlet") return Bc::Dirichlet;
    if (s == "neumann") return Bc::Neumann;
    if (s == "periodic") return Bc::Periodic;
    if (s == "dirichlet_decoupled") return Bc::DirichletDecoupled;
    throw std::invalid_argument("unknown boundary condition: " + s);
}

void BoxSpec::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("BoxSpec: dim must be 1, 2 or 3");
    if (static_cast<int>(sides.size()) != dim)
        throw std::invalid_argument("BoxSpec: sides/dim mismatch");
    for (int s : sides)
        if (s <= 0) throw std::invalid_argument("BoxSpec: sides must be positive");
    if (!(spacing > 0.0)) throw std::invalid_argument("BoxSpec: spacing must be positive");
}

int BoxSpec::site_count() const {
    int n = 1;
    for (int s : sides) n *= s;
    return n;
}

double BoxSpec::volume() const { return site_count() * std::pow(spacing, dim); }

int BoxSpec::stride(int axis) const {
    int s = 1;
    for (int j = 0; j < axis; ++j) s *= sides[j];
    return s;
}

int BoxSpec::index_of(const std::array<int, 3>& coord) const {
    int idx = 0;
    for (int j = dim - 1; j >= 0; --j) idx = idx * sides[j] + coord[j];
    return idx;
}

std::array<int, 3> BoxSpec::coord_of(int index) const {
    std::array<int, 3> c{0, 0, 0};
    for (int j = 0; j < dim; ++j) {
        c[j] = index % sides[j];
        index /= sides[j];
    }
    return c;
}

bool BoxSpec::contains(const std::array<int, 3>& coord) const {
    for (int j = 0; j < dim; ++j)
        if (coord[j] < 0 || coord[j] >= sides[j]) return false;
    return true;
}

int BoxSpec::bandwidth() const {
    int bw = stride(dim - 1);
    if (bc == Bc::Periodic) {
        for (int j = 0; j < dim; ++j)
            if (sides[j] > 1) bw = std::max(bw, (sides[j] - 1) * stride(j));
    }
    return std::min(bw, std::max(site_count() - 1, 1));
}

void PotentialField::validate(const BoxSpec& box) const {
    if (static_cast<int>(values.size()) != box.site_count())
        throw std::invalid_argument("PotentialField: length does not match box site count");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("PotentialField: non-finite value");
}

HamiltonianMatrix build_hamiltonian(const BoxSpec& box, const PotentialField& v) {
    box.validate();
    v.validate(box);
    const int n = box.site_count();
    const double w = 1.0 / (box.spacing * box.spacing);
    SymBandMatrix m(n, box.bandwidth());

    for (int idx = 0; idx < n; ++idx) {
        auto c = box.coord_of(idx);
        int degree = 0;
        for (int j = 0; j < box.dim; ++j) {
            for (int dir : {+1, -1}) {
                auto nb = c;
                nb[j] += dir;
                if (box.bc == Bc::Periodic) {
                    nb[j] = (nb[j] + box.sides[j]) % box.sides[j];
                    if (box.index_of(nb) != idx) ++degree;
                } else if (box.contains(nb)) {
                    ++degree;
                } else if (box.bc == Bc::Dirichlet) {
                    ++degree;  // exterior site clamped to zero keeps full degree
                } else if (box.bc == Bc::DirichletDecoupled) {
                    degree += 2;  // reflection-type penalty, makes bracketing exact
                }
            }
            // undirected edges once: +1 direction only
            auto nb = c;
            nb[j] += 1;
            if (box.bc == Bc::Periodic) {
                nb[j] %= box.sides[j];
                int other = box.index_of(nb);
                if (other != idx) m.add(idx, other, -w);
            } else if (box.contains(nb)) {
                m.add(idx, box.index_of(nb), -w);
            }
        }
        m.add(idx, idx, w * degree + v.values[idx]);
    }

    HamiltonianMatrix h;
    h.box = box;
    h.matrix = std::move(m);
    h.lower_bound = *std::min_element(v.values.begin(), v.values.end());
    return h;
}

PotentialField periodic_background(const std::vector<double>& unit_cell,
                                   const std::vector<int>& cell_sides, const BoxSpec& box) {
    box.validate();
    if (unit_cell.empty()) throw std::invalid_argument("periodic_background: empty cell");
    if (static_cast<int>(cell_sides.size()) != box.dim)
        throw std::invalid_argument("periodic_background: cell rank mismatch");
    int cell_count = 1;
    for (int s : cell_sides) {
        if (s <= 0) throw std::invalid_argument("periodic_background: bad cell side");
        cell_count *= s;
    }
    if (static_cast<int>(unit_cell.size()) != cell_count)
        throw std::invalid_argument("periodic_background: cell size mismatch");

    PotentialField out;
    out.values.resize(box.site_count());
    for (int idx = 0; idx < box.site_count(); ++idx) {
        auto c = box.coord_of(idx);
        int cidx = 0;
        for (int j = box.dim - 1; j >= 0; --j) cidx = cidx * cell_sides[j] + (c[j] % cell_sides[j]);
        out.values[idx] = unit_cell[cidx];
    }
    return out;
}

}  // namespace idslab
