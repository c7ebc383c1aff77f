#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "idslab/matrix.hpp"

namespace idslab {

enum class Bc { Dirichlet, Neumann, Periodic, DirichletDecoupled };

const char* to_string(Bc bc);
Bc bc_from_string(const std::string& s);

/// Geometry of a finite box in Z^d.
///
/// Sites are enumerated with the first axis varying fastest:
/// index = x0 + sides[0]*(x1 + sides[1]*x2). The stride of the last axis,
/// i.e. the product of all sides but the last, bounds the stencil
/// bandwidth under Dirichlet/Neumann conditions.
struct BoxSpec {
    int dim = 1;
    std::vector<int> sides;   // dim entries, all positive
    double spacing = 1.0;     // 1 for pure lattice models, 1/m in continuum mode
    Bc bc = Bc::Dirichlet;

    void validate() const;
    int site_count() const;
    double volume() const;    // site_count * spacing^dim
    int stride(int axis) const;
    int index_of(const std::array<int, 3>& coord) const;
    std::array<int, 3> coord_of(int index) const;
    bool contains(const std::array<int, 3>& coord) const;
    /// stencil bandwidth: product of sides excluding the last axis,
    /// enlarged for periodic wrap-around couplings
    int bandwidth() const;
};

/// Real potential, one value per site in box order.
struct PotentialField {
    std::vector<double> values;

    void validate(const BoxSpec& box) const;
};

/// Assembled H = -Delta + V in symmetric banded storage, with the spectral
/// lower bound min V recorded (the kinetic part is positive semidefinite).
struct HamiltonianMatrix {
    BoxSpec box;
    SymBandMatrix matrix;
    double lower_bound = 0.0;

    int dim() const { return matrix.dim(); }
};

/// (H psi)(n) = h^-2 sum_{m~n} (psi(n) - psi(m)) + V(n) psi(n).
/// Dirichlet keeps the full degree 2d (exterior psi = 0), Neumann drops
/// exterior edges, Periodic wraps. DirichletDecoupled charges 2/h^2 per
/// missing neighbour, the reflection-type variant whose counting
/// functions are exactly superadditive under box splitting.
HamiltonianMatrix build_hamiltonian(const BoxSpec& box, const PotentialField& v);

/// V_per tiled over the box from a unit cell given in box order of the
/// cell's own sides (cell_sides has box.dim entries).
PotentialField periodic_background(const std::vector<double>& unit_cell,
                                   const std::vector<int>& cell_sides, const BoxSpec& box);

}  // namespace idslab
