#pragma once

#include <cstdint>
#include <vector>

#include "idslab/disorder.hpp"
#include "idslab/lattice.hpp"

namespace idslab {

/// A random operator family H_omega = -Delta + V_per + V_omega on a box
/// template; scale ladders replace every side by the requested length.
struct AlloyModel {
    BoxSpec box;
    DisorderSpec disorder;
    SingleSiteProfile profile = SingleSiteProfile::delta();
    std::vector<double> vper_cell;   // empty = no periodic background
    std::vector<int> vper_sides;

    BoxSpec box_at_scale(int l) const {
        BoxSpec b = box;
        for (auto& s : b.sides) s = l;
        return b;
    }

    PotentialField potential(const BoxSpec& b, std::uint64_t seed, std::uint64_t trial) const {
        auto omega = sample_couplings(disorder, b, seed, trial);
        auto v = assemble_alloy_potential(omega, profile, b);
        if (!vper_cell.empty()) {
            auto vp = periodic_background(vper_cell, vper_sides, b);
            for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] += vp.values[i];
        }
        return v;
    }

    HamiltonianMatrix sample(const BoxSpec& b, std::uint64_t seed, std::uint64_t trial) const {
        return build_hamiltonian(b, potential(b, seed, trial));
    }

    HamiltonianMatrix sample(std::uint64_t seed, std::uint64_t trial) const {
        return sample(box, seed, trial);
    }
};

}  // namespace idslab
