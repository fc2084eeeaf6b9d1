#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qblfq/ansatz.hpp"
#include "qblfq/blfq.hpp"
#include "qblfq/observables.hpp"
#include "qblfq/optimize.hpp"
#include "qblfq/pauli.hpp"
#include "qblfq/runconfig.hpp"
#include "qblfq/sim.hpp"
#include "qblfq/vqe.hpp"

namespace py = pybind11;
using namespace qblfq;

namespace {

Matrix matrix_from_numpy(const py::array_t<cxd>& arr) {
    const auto buf = arr.request();
    if (buf.ndim != 2 || buf.shape[0] != buf.shape[1])
        throw std::invalid_argument("expected a square 2-D array");
    const auto n = static_cast<std::size_t>(buf.shape[0]);
    Matrix m(n, n);
    const auto acc = arr.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = acc(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j));
    return m;
}

py::array_t<cxd> matrix_to_numpy(const Matrix& m) {
    py::array_t<cxd> arr({m.rows(), m.cols()});
    auto acc = arr.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            acc(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
    return arr;
}

py::array_t<cxd> state_to_numpy(const QuantumState& psi) {
    py::array_t<cxd> arr(std::vector<py::ssize_t>{static_cast<py::ssize_t>(psi.size())});
    auto acc = arr.mutable_unchecked<1>();
    for (std::size_t i = 0; i < psi.size(); ++i) acc(static_cast<py::ssize_t>(i)) = psi[i];
    return arr;
}

QuantumState state_from_numpy(const py::array_t<cxd>& arr) {
    const auto acc = arr.unchecked<1>();
    QuantumState psi(static_cast<std::size_t>(acc.shape(0)));
    for (py::ssize_t i = 0; i < acc.shape(0); ++i) psi[static_cast<std::size_t>(i)] = acc(i);
    return psi;
}

std::vector<cxd> coeffs_from_numpy(const py::array_t<cxd>& arr) { return state_from_numpy(arr); }

py::dict operator_terms(const PauliOperator& op) {
    py::dict d;
    for (const auto& [s, c] : op.terms()) d[py::str(s.to_string())] = c;
    return d;
}

Tier tier_from_string(const std::string& t) {
    if (t == "sv") return Tier::SV;
    if (t == "shots") return Tier::SHOTS;
    if (t == "noisy") return Tier::NOISY;
    throw std::invalid_argument("tier must be sv|shots|noisy");
}

OptimizerKind optimizer_from_string(const std::string& k) {
    if (k == "spsa") return OptimizerKind::SPSA;
    if (k == "simplex") return OptimizerKind::SIMPLEX;
    if (k == "grad") return OptimizerKind::GRAD;
    throw std::invalid_argument("optimizer must be spsa|simplex|grad");
}

DecayChannel channel_from_string(const std::string& c) {
    if (c == "pseudoscalar") return DecayChannel::pseudoscalar;
    if (c == "vector") return DecayChannel::vector;
    throw std::invalid_argument("channel must be pseudoscalar|vector");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Light-front hadron Hamiltonians on simulated quantum devices";

    py::class_<PauliOperator>(m, "PauliOperator")
        .def(py::init([](py::dict terms) {
            PauliOperator op;
            bool first = true;
            for (auto item : terms) {
                const auto s = PauliString::from_string(item.first.cast<std::string>());
                if (first) {
                    op = PauliOperator(s.n_qubits());
                    first = false;
                }
                op.add_term(s, item.second.cast<cxd>());
            }
            if (first) throw std::invalid_argument("empty term dictionary");
            return op;
        }))
        .def_property_readonly("n_qubits", &PauliOperator::n_qubits)
        .def_property_readonly("n_terms", &PauliOperator::n_terms)
        .def("terms", &operator_terms)
        .def("coefficient",
             [](const PauliOperator& op, const std::string& s) {
                 return op.coefficient(PauliString::from_string(s));
             })
        .def("is_hermitian", &PauliOperator::is_hermitian, py::arg("tol") = 1e-9)
        .def("to_text", &PauliOperator::to_text)
        .def_static("from_text", &PauliOperator::from_text);

    m.def("multiply_strings", [](const std::string& a, const std::string& b) {
        const auto p = multiply(PauliString::from_string(a), PauliString::from_string(b));
        return py::make_tuple(p.phase, p.string.to_string());
    });
    m.def("commutes_qubitwise", [](const std::string& a, const std::string& b) {
        return commutes_qubitwise(PauliString::from_string(a), PauliString::from_string(b));
    });
    m.def("group_commuting", [](const PauliOperator& op) {
        py::list groups;
        for (const auto& g : group_commuting(op)) {
            py::list group;
            for (const auto& t : g)
                group.append(py::make_tuple(t.string.to_string(), t.coefficient));
            groups.append(group);
        }
        return groups;
    });
    m.def("jw_lower", &jw_lower, py::arg("mode"), py::arg("n_qubits"));
    m.def("jw_raise", &jw_raise, py::arg("mode"), py::arg("n_qubits"));
    m.def("jw_encode_one_body",
          [](const py::array_t<cxd>& h) { return jw_encode_one_body(matrix_from_numpy(h)); });
    m.def(
        "compact_encode",
        [](const py::array_t<cxd>& h, double tol) {
            return compact_encode(matrix_from_numpy(h), tol);
        },
        py::arg("h"), py::arg("rel_drop_tol") = 1e-12);
    m.def(
        "reconstruct_matrix",
        [](const PauliOperator& op, int cap) { return matrix_to_numpy(reconstruct_matrix(op, cap)); },
        py::arg("op"), py::arg("max_qubits") = 12);

    py::class_<BlfqState>(m, "BlfqState")
        .def_readonly("n", &BlfqState::n)
        .def_readonly("m", &BlfqState::m)
        .def_readonly("l", &BlfqState::l)
        .def_readonly("twos", &BlfqState::twos)
        .def_readonly("twosbar", &BlfqState::twosbar)
        .def("__repr__", [](const BlfqState& s) {
            return "BlfqState(n=" + std::to_string(s.n) + ", m=" + std::to_string(s.m) +
                   ", l=" + std::to_string(s.l) + ", 2s=" + std::to_string(s.twos) +
                   ", 2sbar=" + std::to_string(s.twosbar) + ")";
        });

    py::class_<ModelParams>(m, "ModelParams")
        .def_readonly("kappa_mev", &ModelParams::kappa_mev)
        .def_readonly("mq_mev", &ModelParams::mq_mev)
        .def_readonly("nf", &ModelParams::nf)
        .def_readonly("alpha_s0", &ModelParams::alpha_s0)
        .def("alpha", &ModelParams::alpha)
        .def("beta", &ModelParams::beta);

    py::class_<BasisCatalog>(m, "BasisCatalog")
        .def_readonly("nmax", &BasisCatalog::nmax)
        .def_readonly("lmax", &BasisCatalog::lmax)
        .def_readonly("states", &BasisCatalog::states)
        .def("size", &BasisCatalog::size)
        .def("compact_qubits", &BasisCatalog::compact_qubits)
        .def("bitstring", &BasisCatalog::bitstring);

    py::class_<HamiltonianSource>(m, "HamiltonianSource")
        .def_property_readonly("matrix",
                               [](const HamiltonianSource& s) { return matrix_to_numpy(s.matrix); })
        .def_readonly("catalog", &HamiltonianSource::catalog)
        .def_readonly("params", &HamiltonianSource::params);

    m.def("builtin_hamiltonian",
          [](const std::string& label) { return builtin_hamiltonian(label); });
    m.def("load_external_hamiltonian",
          [](const std::string& matrix_path, const std::string& catalog_path, double kappa,
             double mq) {
              ModelParams p;
              p.kappa_mev = kappa;
              p.mq_mev = mq;
              return load_external_hamiltonian(matrix_path, catalog_path, p);
          });
    m.def("exact_eigensolve", [](const HamiltonianSource& src) {
        const auto eig = exact_eigensolve(src);
        py::array_t<double> values(std::vector<py::ssize_t>{static_cast<py::ssize_t>(eig.values.size())});
        auto acc = values.mutable_unchecked<1>();
        for (std::size_t i = 0; i < eig.values.size(); ++i)
            acc(static_cast<py::ssize_t>(i)) = eig.values[i];
        return py::make_tuple(values, matrix_to_numpy(eig.vectors));
    });
    m.def("exact_eigensolve_matrix", [](const py::array_t<cxd>& h) {
        const auto eig = exact_eigensolve(matrix_from_numpy(h));
        py::array_t<double> values(std::vector<py::ssize_t>{static_cast<py::ssize_t>(eig.values.size())});
        auto acc = values.mutable_unchecked<1>();
        for (std::size_t i = 0; i < eig.values.size(); ++i)
            acc(static_cast<py::ssize_t>(i)) = eig.values[i];
        return py::make_tuple(values, matrix_to_numpy(eig.vectors));
    });
    m.def("chi_l", [](double x, int l, const ModelParams& p) { return chi_l(x, l, p); });
    m.def("phi_nm", &phi_nm, py::arg("qx_mev"), py::arg("qy_mev"), py::arg("n"), py::arg("m"),
          py::arg("kappa_mev"));

    py::class_<Circuit>(m, "Circuit")
        .def_readonly("n_qubits", &Circuit::n_qubits)
        .def_readonly("n_parameters", &Circuit::n_parameters)
        .def("dump", &Circuit::dump);
    m.def("build_hea", &build_hea, py::arg("n_qubits"), py::arg("reps"));
    m.def("build_ucc_single", &build_ucc_single, py::arg("n_qubits"), py::arg("occupied_mode"),
          py::arg("trotter_rho") = 1);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init<>())
        .def_readwrite("readout_p01", &NoiseSpec::readout_p01)
        .def_readwrite("readout_p10", &NoiseSpec::readout_p10)
        .def_readwrite("depol_1q", &NoiseSpec::depol_1q)
        .def_readwrite("depol_2q", &NoiseSpec::depol_2q)
        .def_readwrite("seed", &NoiseSpec::seed);

    py::class_<MitigationFilter>(m, "MitigationFilter")
        .def_property_readonly(
            "calibration",
            [](const MitigationFilter& f) { return matrix_to_numpy(f.calibration); })
        .def_readonly("n_qubits", &MitigationFilter::n_qubits);

    m.def(
        "apply_circuit",
        [](const Circuit& c, const std::vector<double>& params, std::uint64_t initial) {
            return state_to_numpy(apply_circuit(c, params, initial));
        },
        py::arg("circuit"), py::arg("params"), py::arg("initial") = 0);
    m.def("expectation_exact", [](const py::array_t<cxd>& psi, const PauliOperator& op) {
        return expectation_exact(state_from_numpy(psi), op);
    });
    m.def(
        "expectation_sampled",
        [](const Circuit& c, const std::vector<double>& params, std::uint64_t initial,
           const PauliOperator& op, std::uint64_t shots, std::uint64_t seed,
           const NoiseSpec* noise, const MitigationFilter* filter) {
            const auto r = expectation_sampled(c, params, initial, op, shots, seed, noise, filter);
            return py::make_tuple(r.mean, r.std_error);
        },
        py::arg("circuit"), py::arg("params"), py::arg("initial"), py::arg("op"),
        py::arg("shots"), py::arg("seed"), py::arg("noise") = nullptr,
        py::arg("filter") = nullptr);
    m.def("build_calibration_filter", &build_calibration_filter, py::arg("n_qubits"),
          py::arg("noise"), py::arg("shots_per_state"), py::arg("seed"));
    m.def("density_matrix", [](const py::array_t<cxd>& psi) {
        return matrix_to_numpy(density_matrix(state_from_numpy(psi)));
    });

    py::class_<StateResult>(m, "StateResult")
        .def_readonly("reference_bitstring", &StateResult::reference_bitstring)
        .def_readonly("energy_mev2", &StateResult::energy_mev2)
        .def_readonly("mass_mev", &StateResult::mass_mev)
        .def_readonly("std_error", &StateResult::std_error)
        .def_property_readonly(
            "final_state", [](const StateResult& s) { return state_to_numpy(s.final_state); })
        .def("trace_csv", &StateResult::trace_csv);

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("states", &SpectrumResult::states)
        .def_property_readonly("final_params",
                               [](const SpectrumResult& r) { return r.final_params; })
        .def_property_readonly(
            "cost_trace_csv",
            [](const SpectrumResult& r) { return r.optimizer_trace.to_csv(); })
        .def_property_readonly("termination", [](const SpectrumResult& r) {
            return r.optimizer_trace.termination;
        });

    auto make_run = [](const std::string& tier, std::uint64_t shots, const NoiseSpec* noise,
                       bool mitigation) {
        RunSettings s;
        s.tier = tier_from_string(tier);
        s.shots = shots;
        if (noise) s.noise = *noise;
        s.mitigation = mitigation;
        return s;
    };
    auto make_opt = [](const std::string& kind, int iters, double tol, int restarts) {
        OptimizerConfig cfg;
        cfg.kind = optimizer_from_string(kind);
        cfg.max_iterations = iters;
        cfg.tolerance = tol;
        cfg.restarts = restarts;
        return cfg;
    };

    m.def(
        "run_vqe",
        [=](const PauliOperator& h, const std::string& ansatz_kind, int reps, int occupied_mode,
            std::uint64_t initial, const std::string& tier, std::uint64_t shots,
            const NoiseSpec* noise, bool mitigation, const std::string& optimizer, int iterations,
            double tolerance, int restarts, std::uint64_t seed) {
            AnsatzSpec spec;
            spec.kind = ansatz_kind == "ucc" ? AnsatzKind::UCC_single : AnsatzKind::HEA;
            spec.n_qubits = h.n_qubits();
            spec.reps = reps;
            spec.occupied_mode = occupied_mode;
            return run_vqe(h, spec, initial, make_run(tier, shots, noise, mitigation),
                           make_opt(optimizer, iterations, tolerance, restarts), seed);
        },
        py::arg("hamiltonian"), py::arg("ansatz") = "hea", py::arg("reps") = 1,
        py::arg("occupied_mode") = 0, py::arg("initial") = 0, py::arg("tier") = "sv",
        py::arg("shots") = 8192, py::arg("noise") = nullptr, py::arg("mitigation") = false,
        py::arg("optimizer") = "grad", py::arg("iterations") = 2000,
        py::arg("tolerance") = 1e-5, py::arg("restarts") = 5, py::arg("seed") = 1);

    m.def(
        "run_ssvqe",
        [=](const PauliOperator& h, const std::string& ansatz_kind, int reps,
            const std::vector<std::uint64_t>& references, const std::vector<double>& weights,
            const std::string& tier, std::uint64_t shots, const NoiseSpec* noise, bool mitigation,
            const std::string& optimizer, int iterations, double tolerance, int restarts,
            std::uint64_t seed) {
            AnsatzSpec spec;
            spec.kind = ansatz_kind == "ucc" ? AnsatzKind::UCC_single : AnsatzKind::HEA;
            spec.n_qubits = h.n_qubits();
            spec.reps = reps;
            SsvqeSpec ss;
            ss.references = references;
            if (weights.empty()) {
                double w = 1.0;
                for (std::size_t i = 0; i < references.size(); ++i, w *= 0.5)
                    ss.weights.push_back(w);
            } else {
                ss.weights = weights;
            }
            return run_ssvqe(h, spec, ss, make_run(tier, shots, noise, mitigation),
                             make_opt(optimizer, iterations, tolerance, restarts), seed);
        },
        py::arg("hamiltonian"), py::arg("ansatz") = "hea", py::arg("reps") = 2,
        py::arg("references") = std::vector<std::uint64_t>{0, 1, 2, 3},
        py::arg("weights") = std::vector<double>{}, py::arg("tier") = "sv",
        py::arg("shots") = 8192, py::arg("noise") = nullptr, py::arg("mitigation") = false,
        py::arg("optimizer") = "grad", py::arg("iterations") = 2000,
        py::arg("tolerance") = 1e-5, py::arg("restarts") = 5, py::arg("seed") = 1);

    py::class_<DecayResult>(m, "DecayResult")
        .def_readonly("f_mev", &DecayResult::f_mev)
        .def_readonly("std_error", &DecayResult::std_error)
        .def_readonly("k_mev", &DecayResult::k_mev)
        .def_readonly("clamped", &DecayResult::clamped)
        .def("to_json", &DecayResult::to_json);

    m.def("decay_vector", [](const std::string& channel, const BasisCatalog& cat) {
        return decay_vector(channel_from_string(channel), cat).components;
    });
    m.def("decay_projector", [](const std::string& channel, const BasisCatalog& cat) {
        return decay_projector(channel_from_string(channel), cat);
    });
    m.def("calibrate_decay_prefactor",
          [](const HamiltonianSource& src) { return calibrate_decay_prefactor(src).k_mev; });
    m.def(
        "measure_decay_constant",
        [](const py::array_t<cxd>& state, const std::string& channel,
           const HamiltonianSource& src, const std::string& tier, std::uint64_t shots,
           std::uint64_t seed) {
            return measure_decay_constant(state_from_numpy(state), channel_from_string(channel),
                                          src, tier_from_string(tier), shots, seed);
        },
        py::arg("state"), py::arg("channel"), py::arg("source"), py::arg("tier") = "sv",
        py::arg("shots") = 20000, py::arg("seed") = 1);

    m.def("pdf_operator", [](double x, const BasisCatalog& cat, const ModelParams& p) {
        return pdf_operator(x, cat, p);
    });
    m.def("classical_pdf",
          [](const py::array_t<cxd>& coeffs, const BasisCatalog& cat, const ModelParams& p,
             double x) { return classical_pdf(coeffs_from_numpy(coeffs), cat, p, x); });
    m.def("default_pdf_grid", &default_pdf_grid, py::arg("points") = 19);
    m.def(
        "pdf_scan",
        [](const py::array_t<cxd>& state, const BasisCatalog& cat, const ModelParams& p,
           const std::vector<double>& grid, const std::string& tier, std::uint64_t shots,
           std::uint64_t seed) {
            const auto scan =
                pdf_scan(state_from_numpy(state), cat, p, grid, tier_from_string(tier), shots, seed);
            py::list out;
            for (const auto& pt : scan) out.append(py::make_tuple(pt.x, pt.q, pt.std_error));
            return out;
        },
        py::arg("state"), py::arg("catalog"), py::arg("params"), py::arg("grid"),
        py::arg("tier") = "sv", py::arg("shots") = 20000, py::arg("seed") = 1);

    m.attr("__version__") = "0.1.0";
}
