#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idslab/averaging.hpp"
#include "idslab/ids.hpp"
#include "idslab/ssf.hpp"
#include "idslab/toeplitz.hpp"
#include "idslab/wegner.hpp"

namespace py = pybind11;
using namespace idslab;

namespace {

DMatrix dmatrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    DMatrix m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        for (py::ssize_t j = 0; j < a.shape(1); ++j) m(static_cast<int>(i), static_cast<int>(j)) = r(i, j);
    return m;
}

py::array_t<double> numpy_from_dmatrix(const DMatrix& m) {
    py::array_t<double> a({m.rows(), m.cols()});
    auto w = a.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
    return a;
}

std::vector<std::pair<std::array<int, 3>, double>> terms_from_list(
    const std::vector<std::pair<std::vector<int>, double>>& terms) {
    std::vector<std::pair<std::array<int, 3>, double>> out;
    for (auto& [off, v] : terms) {
        std::array<int, 3> o{0, 0, 0};
        for (std::size_t i = 0; i < off.size() && i < 3; ++i) o[i] = off[i];
        out.emplace_back(o, v);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-volume random lattice operators: IDS, Wegner and SSF toolkit";
    m.attr("__version__") = kVersion;

    py::enum_<Bc>(m, "Bc")
        .value("dirichlet", Bc::Dirichlet)
        .value("neumann", Bc::Neumann)
        .value("periodic", Bc::Periodic);

    py::class_<BoxSpec>(m, "Box")
        .def(py::init([](int dim, std::vector<int> sides, double spacing, Bc bc) {
                 BoxSpec b{dim, std::move(sides), spacing, bc};
                 b.validate();
                 return b;
             }),
             py::arg("dim"), py::arg("sides"), py::arg("spacing") = 1.0,
             py::arg("bc") = Bc::Dirichlet)
        .def_readonly("dim", &BoxSpec::dim)
        .def_readonly("sides", &BoxSpec::sides)
        .def_readonly("spacing", &BoxSpec::spacing)
        .def("site_count", &BoxSpec::site_count)
        .def("volume", &BoxSpec::volume);

    py::class_<HamiltonianMatrix>(m, "Hamiltonian")
        .def_property_readonly("lower_bound", [](const HamiltonianMatrix& h) { return h.lower_bound; })
        .def("dim", &HamiltonianMatrix::dim)
        .def("to_dense", [](const HamiltonianMatrix& h) { return numpy_from_dmatrix(h.matrix.to_dense()); });

    m.def("build_hamiltonian",
          [](const BoxSpec& box, const std::vector<double>& values) {
              PotentialField v;
              v.values = values;
              return build_hamiltonian(box, v);
          },
          py::arg("box"), py::arg("potential"));

    py::class_<DisorderSpec>(m, "Disorder")
        .def_static("uniform",
                    [](double a, double b) {
                        DisorderSpec d;
                        d.dist = DistClass::Uniform;
                        d.uniform_a = a;
                        d.uniform_b = b;
                        return d;
                    })
        .def_static("bernoulli",
                    [](double p, double qa, double qb) {
                        DisorderSpec d;
                        d.dist = DistClass::Bernoulli;
                        d.bernoulli_p = p;
                        d.bernoulli_qa = qa;
                        d.bernoulli_qb = qb;
                        return d;
                    },
                    py::arg("p"), py::arg("qa") = 1.0, py::arg("qb") = 0.0)
        .def_static("laplace", [](double scale) {
            DisorderSpec d;
            d.dist = DistClass::Laplace;
            d.laplace_scale = scale;
            return d;
        });

    m.def("sample_couplings",
          [](const DisorderSpec& spec, const BoxSpec& box, std::uint64_t seed,
             std::uint64_t trial) { return sample_couplings(spec, box, seed, trial).values; },
          py::arg("disorder"), py::arg("box"), py::arg("seed"), py::arg("trial"));

    m.def("assemble_alloy_potential",
          [](const std::vector<double>& couplings,
             const std::vector<std::pair<std::vector<int>, double>>& terms, const BoxSpec& box) {
              CouplingField om;
              om.values = couplings;
              auto prof = SingleSiteProfile::from_terms(terms_from_list(terms));
              return assemble_alloy_potential(om, prof, box).values;
          },
          py::arg("couplings"), py::arg("profile_terms"), py::arg("box"));

    m.def("percolation_cluster",
          [](const BoxSpec& box, double p, std::uint64_t seed, std::uint64_t trial) {
              return percolation_cluster(box, p, seed, trial).retained;
          },
          py::arg("box"), py::arg("p"), py::arg("seed"), py::arg("trial"));

    m.def("holder_modulus", &holder_modulus, py::arg("disorder"), py::arg("eps"));

    m.def("eigenvalues",
          [](const HamiltonianMatrix& h) { return eigenvalues(h.matrix, false).values; },
          py::arg("hamiltonian"));
    m.def("count_below",
          [](const HamiltonianMatrix& h, double e) { return count_below(h.matrix, e); },
          py::arg("hamiltonian"), py::arg("energy"));
    m.def("eigenvalues_dense",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
              return dense_symmetric_eigen(dmatrix_from_numpy(a), false).values;
          },
          py::arg("matrix"));
    m.def("singular_values",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
              return singular_values(dmatrix_from_numpy(a));
          },
          py::arg("matrix"));

    m.def("laplace_transform",
          [](const HamiltonianMatrix& h, double t) {
              return laplace_transform(counting_function(h), t);
          },
          py::arg("hamiltonian"), py::arg("t"));

    py::class_<SSFTable>(m, "SSFTable")
        .def_readonly("breakpoints", &SSFTable::breakpoints)
        .def_readonly("xi", &SSFTable::xi)
        .def("sup_abs", &SSFTable::sup_abs)
        .def("l1_norm", &SSFTable::l1_norm);

    m.def("ssf",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
              return ssf(dmatrix_from_numpy(a), dmatrix_from_numpy(b));
          },
          py::arg("a"), py::arg("b"));

    m.def("toeplitz_rowsum",
          [](const std::vector<std::pair<std::vector<int>, double>>& alpha, const BoxSpec& box) {
              auto v = inverse_rowsum(toeplitz_matrix(terms_from_list(alpha), box));
              return py::make_tuple(v.normalized_norm, v.bound, v.ok);
          },
          py::arg("alpha"), py::arg("box"));

    m.def("symbol_analysis",
          [](const std::vector<std::pair<std::vector<int>, double>>& alpha, int dim) {
              auto rep = symbol_analysis(terms_from_list(alpha), dim);
              return py::make_tuple(rep.certified_min, rep.winding);
          },
          py::arg("alpha"), py::arg("dim") = 1);

    py::class_<SpencerReport>(m, "SpencerReport")
        .def_readonly("splitting", &SpencerReport::splitting)
        .def_readonly("amp_product_ground", &SpencerReport::amp_product_ground)
        .def_readonly("sigma_distance", &SpencerReport::sigma_distance)
        .def_readonly("mass_ratio", &SpencerReport::mass_ratio);

    m.def("spencer_double_well",
          [](double depth, int width, int rho, const std::string& mode, double detune) {
              return spencer_double_well(depth, width, rho,
                                         mode == "detuned" ? WellMode::Detuned : WellMode::Symmetric,
                                         detune);
          },
          py::arg("depth"), py::arg("width"), py::arg("rho"), py::arg("mode") = "symmetric",
          py::arg("detune") = 0.0);
}
