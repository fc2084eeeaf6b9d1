#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>

#include "qblfq/ansatz.hpp"
#include "qblfq/optimize.hpp"
#include "qblfq/pauli.hpp"
#include "qblfq/rng.hpp"
#include "qblfq/sim.hpp"
#include "test_util.hpp"

using namespace qblfq;
using testutil::dense_from_operator;

namespace {

// scaling-and-squaring Taylor exponential, test oracle only
Matrix expm(Matrix a) {
    int squarings = 0;
    while (a.max_abs() > 0.25) {
        a *= 0.5;
        ++squarings;
    }
    Matrix result = Matrix::identity(a.rows());
    Matrix term = Matrix::identity(a.rows());
    for (int k = 1; k <= 24; ++k) {
        term = term * a;
        term *= 1.0 / k;
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// exp(sum_p theta_p (a_p^dag a_r - a_r^dag a_p)) acting on |one-hot r>
QuantumState ucc_exact_state(int n, int occupied, const std::vector<double>& thetas) {
    Matrix gen(1ULL << n, 1ULL << n);
    int k = 0;
    for (int p = 0; p < n; ++p) {
        if (p == occupied) continue;
        PauliOperator g = multiply(jw_raise(p, n), jw_lower(occupied, n));
        PauliOperator g2 = multiply(jw_raise(occupied, n), jw_lower(p, n));
        g2 *= -1.0;
        g += g2;
        g *= thetas[static_cast<std::size_t>(k++)];
        gen += dense_from_operator(g);
    }
    const Matrix u = expm(gen);
    QuantumState psi(1ULL << n, cxd{});
    for (std::size_t i = 0; i < psi.size(); ++i)
        psi[i] = u(i, 1ULL << occupied);
    return psi;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    cxd dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += std::conj(a[i]) * b[i];
    return std::norm(dot);
}

}  // namespace

TEST_CASE("HEA parameter counts match the published circuit summaries") {
    CHECK(build_hea(2, 1).n_parameters == 8);
    CHECK(build_hea(4, 6).n_parameters == 56);
    CHECK(build_hea(5, 5).n_parameters == 60);
    CHECK(AnsatzSpec{AnsatzKind::HEA, 2, 1}.parameter_count() == 8);
}

TEST_CASE("HEA layer structure") {
    const auto c = build_hea(3, 2);
    // 3 rotation layers of RY+RZ on each qubit, 2 CX chains of 2 gates
    int rot = 0, cx = 0;
    for (const auto& g : c.gates) {
        if (g.kind == GateKind::CX) ++cx;
        if (g.kind == GateKind::RY || g.kind == GateKind::RZ) ++rot;
    }
    CHECK(rot == 18);
    CHECK(cx == 4);
    CHECK(c.gates[0].kind == GateKind::RY);
    // linear chain: control i, target i+1
    CHECK(c.gates[6].kind == GateKind::CX);
    CHECK(c.gates[6].control == 0);
    CHECK(c.gates[6].target == 1);
    CHECK(c.gates[7].control == 1);
    CHECK(c.gates[7].target == 2);
}

TEST_CASE("UCC structure: parameters and sub-circuits") {
    const auto c = build_ucc_single(4, 0, 1);
    CHECK(c.n_parameters == 3);
    int exponentials = 0;
    for (const auto& g : c.gates)
        if (g.kind == GateKind::RZ && g.param_index >= 0) ++exponentials;
    CHECK(exponentials == 6);  // two Pauli exponentials per virtual mode
}

TEST_CASE("UCC at zero angles is the identity on the reference") {
    const auto c = build_ucc_single(4, 0, 1);
    std::vector<double> zeros(3, 0.0);
    const auto psi = apply_circuit(c, zeros, 1);  // |0001>
    CHECK(fidelity(psi, ucc_exact_state(4, 0, zeros)) > 1.0 - 1e-12);
    CHECK(std::abs(std::abs(psi[1]) - 1.0) < 1e-12);
}

TEST_CASE("two-mode UCC is a plane rotation") {
    const auto c = build_ucc_single(2, 0, 1);
    for (double t : {0.3, -1.2, 2.2}) {
        std::vector<double> params{t};
        const auto psi = apply_circuit(c, params, 1);
        // cos(t)|01> + sin(t)|10> up to a global phase
        CHECK(std::abs(std::abs(psi[1]) - std::abs(std::cos(t))) < 1e-10);
        CHECK(std::abs(std::abs(psi[2]) - std::abs(std::sin(t))) < 1e-10);
        CHECK(fidelity(psi, ucc_exact_state(2, 0, params)) > 1.0 - 1e-10);
    }
}

TEST_CASE("trotterized circuit matches the exact exponential pair by pair") {
    for (int p = 1; p < 4; ++p) {
        std::vector<double> thetas(3, 0.0);
        thetas[static_cast<std::size_t>(p - 1)] = 0.77;
        const auto c = build_ucc_single(4, 0, 1);
        const auto psi = apply_circuit(c, thetas, 1);
        CHECK(fidelity(psi, ucc_exact_state(4, 0, thetas)) > 1.0 - 1e-10);
    }
}

TEST_CASE("UCC with a higher occupied mode (p < r branch)") {
    for (int occ : {1, 2, 3}) {
        Rng rng(40u + static_cast<unsigned>(occ));
        std::vector<double> thetas(3);
        // single nonzero angle per check so the exponential factorizes exactly
        for (int slot = 0; slot < 3; ++slot) {
            std::fill(thetas.begin(), thetas.end(), 0.0);
            thetas[static_cast<std::size_t>(slot)] = rng.uniform(-2.0, 2.0);
            const auto c = build_ucc_single(4, occ, 1);
            const auto psi = apply_circuit(c, thetas, 1ULL << occ);
            CHECK(fidelity(psi, ucc_exact_state(4, occ, thetas)) > 1.0 - 1e-10);
        }
    }
}

TEST_CASE("UCC preserves particle number for arbitrary angles") {
    Rng rng(77);
    for (int trial = 0; trial < 8; ++trial) {
        const int rho = 1 + trial % 3;
        const auto c = build_ucc_single(4, 0, rho);
        std::vector<double> thetas(3);
        for (auto& t : thetas) t = rng.uniform(-3.0, 3.0);
        const auto psi = apply_circuit(c, thetas, 1);
        for (std::size_t i = 0; i < psi.size(); ++i)
            if (std::popcount(i) != 1) CHECK(std::abs(psi[i]) < 1e-10);
    }
}

TEST_CASE("HEA can prepare every two-qubit computational basis state") {
    const auto c = build_hea(2, 1);
    for (std::uint64_t target = 0; target < 4; ++target) {
        ObjectiveHandle obj;
        obj.dimension = c.n_parameters;
        obj.evaluate = [&](std::span<const double> params, std::uint64_t) {
            const auto psi = apply_circuit(c, params, 0);
            return 1.0 - std::norm(psi[target]);
        };
        OptimizerConfig cfg;
        cfg.kind = OptimizerKind::SIMPLEX;
        cfg.max_iterations = 4000;
        cfg.tolerance = 1e-14;
        cfg.restarts = 6;
        const auto trace = minimize(obj, cfg, 4242 + target);
        CHECK(trace.final_cost < 1e-6);
    }
}

TEST_CASE("circuit debug dump") {
    const auto c = build_hea(2, 1);
    const auto text = c.dump();
    CHECK(text.find("RY 0 p0") != std::string::npos);
    CHECK(text.find("CX 1 0") != std::string::npos);  // target control
}
