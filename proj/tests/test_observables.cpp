#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qblfq/observables.hpp"
#include "qblfq/quadrature.hpp"
#include "qblfq/rng.hpp"
#include "test_util.hpp"

using namespace qblfq;

namespace {

std::vector<cxd> eigvec(const EigenSystem& eig, std::size_t k) {
    std::vector<cxd> v(eig.vectors.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eig.vectors(i, k);
    return v;
}

double coeff(const PauliOperator& op, const char* s) {
    return op.coefficient(PauliString::from_string(s)).real();
}

// composite Simpson over a uniform grid
double simpson(const std::vector<double>& y, double h) {
    double acc = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += y[i] * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double grid_norm(const std::vector<PdfPoint>& scan) {
    std::vector<double> y{0.0};
    for (const auto& p : scan) y.push_back(p.q);
    y.push_back(0.0);
    return simpson(y, 1.0 / (scan.size() + 1));
}

}  // namespace

TEST_CASE("decay vectors over the catalogs") {
    const auto cat11 = catalog_1_1();
    const auto p11 = decay_vector(DecayChannel::pseudoscalar, cat11);
    const auto v11 = decay_vector(DecayChannel::vector, cat11);
    CHECK(p11.components == std::vector<double>{1, 0, -1, 0});
    CHECK(v11.components == std::vector<double>{1, 0, 1, 0});

    const auto cat41 = catalog_4_1();
    const auto p41 = decay_vector(DecayChannel::pseudoscalar, cat41);
    const auto v41 = decay_vector(DecayChannel::vector, cat41);
    for (int i = 0; i < 16; ++i) {
        const bool support = (i == 4 || i == 6 || i == 8 || i == 10);
        CHECK((p41.components[static_cast<std::size_t>(i)] != 0.0) == support);
        CHECK((v41.components[static_cast<std::size_t>(i)] != 0.0) == support);
    }
    // sign pattern: (-1)^n, pseudoscalar antisymmetric between the spin configs
    CHECK(p41.components[8] == 1.0);
    CHECK(p41.components[10] == -1.0);
    CHECK(p41.components[4] == -1.0);
    CHECK(p41.components[6] == 1.0);
    CHECK(v41.components[4] == 1.0);
    CHECK(v41.components[6] == -1.0);
}

TEST_CASE("decay projectors for (1,1) match the published 4-term form") {
    const auto cat = catalog_1_1();
    const auto proj_p = decay_projector(DecayChannel::pseudoscalar, cat);
    CHECK(proj_p.n_terms() == 4);
    CHECK(coeff(proj_p, "II") == doctest::Approx(0.5));
    CHECK(coeff(proj_p, "IZ") == doctest::Approx(0.5));
    CHECK(coeff(proj_p, "XI") == doctest::Approx(-0.5));
    CHECK(coeff(proj_p, "XZ") == doctest::Approx(-0.5));

    const auto proj_v = decay_projector(DecayChannel::vector, cat);
    CHECK(coeff(proj_v, "II") == doctest::Approx(0.5));
    CHECK(coeff(proj_v, "IZ") == doctest::Approx(0.5));
    CHECK(coeff(proj_v, "XI") == doctest::Approx(0.5));
    CHECK(coeff(proj_v, "XZ") == doctest::Approx(0.5));
}

TEST_CASE("projector property: rank one, eigenvalue |nu|^2") {
    for (int which = 0; which < 2; ++which) {
        const auto cat = which ? catalog_4_1() : catalog_1_1();
        const auto channel = which ? DecayChannel::vector : DecayChannel::pseudoscalar;
        const auto proj = decay_projector(channel, cat);
        const auto nu = decay_vector(channel, cat);
        const auto dense = reconstruct_matrix(proj);
        double nu2 = 0.0;
        for (double c : nu.components) nu2 += c * c;
        for (std::size_t i = 0; i < dense.rows(); ++i)
            for (std::size_t j = 0; j < dense.cols(); ++j)
                CHECK(std::abs(dense(i, j) - nu.components[i] * nu.components[j]) < 1e-12);
        const auto eig = exact_eigensolve(dense);
        CHECK(eig.values.back() == doctest::Approx(nu2));
        for (std::size_t k = 0; k + 1 < eig.values.size(); ++k)
            CHECK(std::abs(eig.values[k]) < 1e-12);
    }
}

TEST_CASE("(1,1) decay constants reproduce the reference value for both states") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto eig = exact_eigensolve(src);

    const auto f_pi = measure_decay_constant(eigvec(eig, 0), DecayChannel::pseudoscalar, src,
                                             Tier::SV, 0, 0);
    CHECK(std::abs(f_pi.f_mev - 178.18) <= 0.01);

    // K is state independent within a catalog
    const auto f_rho =
        measure_decay_constant(eigvec(eig, 1), DecayChannel::vector, src, Tier::SV, 0, 0);
    CHECK(std::abs(f_rho.f_mev - 178.18) <= 0.01);
    CHECK(f_pi.k_mev == doctest::Approx(f_rho.k_mev));

    // phase insensitivity
    auto flipped = eigvec(eig, 0);
    for (auto& a : flipped) a = -a;
    const auto f_neg =
        measure_decay_constant(flipped, DecayChannel::pseudoscalar, src, Tier::SV, 0, 0);
    CHECK(f_neg.f_mev == doctest::Approx(f_pi.f_mev));
}

TEST_CASE("(4,1) decay constants reproduce the reference values") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_4_1);
    const auto eig = exact_eigensolve(src);
    const auto f_pi = measure_decay_constant(eigvec(eig, 0), DecayChannel::pseudoscalar, src,
                                             Tier::SV, 0, 0);
    const auto f_rho =
        measure_decay_constant(eigvec(eig, 1), DecayChannel::vector, src, Tier::SV, 0, 0);
    CHECK(std::abs(f_pi.f_mev - 199.36) <= 0.5);
    CHECK(std::abs(f_rho.f_mev - 227.63) <= 0.5);
}

TEST_CASE("states orthogonal to nu have zero decay constant") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    QuantumState psi(4, cxd{});
    psi[1] = 1.0 / std::sqrt(2.0);
    psi[3] = -1.0 / std::sqrt(2.0);
    const auto f = measure_decay_constant(psi, DecayChannel::pseudoscalar, src, Tier::SV, 0, 0);
    CHECK(f.f_mev == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sampled decay constants agree with the exact ones within errors") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto eig = exact_eigensolve(src);
    const auto sv = measure_decay_constant(eigvec(eig, 0), DecayChannel::pseudoscalar, src,
                                           Tier::SV, 0, 0);
    const auto qasm = measure_decay_constant(eigvec(eig, 0), DecayChannel::pseudoscalar, src,
                                             Tier::SHOTS, 20000, 101);
    // the exact ground state is a measurement eigenstate of the projector's
    // single commuting group, so the sampled value is noise-free
    CHECK(qasm.f_mev == doctest::Approx(sv.f_mev).epsilon(1e-12));
    CHECK(qasm.std_error == 0.0);

    // a slightly rotated state picks up genuine shot noise
    auto tilted = eigvec(eig, 0);
    tilted[1] += 0.2;
    double norm = 0.0;
    for (const auto& a : tilted) norm += std::norm(a);
    for (auto& a : tilted) a /= std::sqrt(norm);
    const auto sv_t =
        measure_decay_constant(tilted, DecayChannel::pseudoscalar, src, Tier::SV, 0, 0);
    const auto qasm_t = measure_decay_constant(tilted, DecayChannel::pseudoscalar, src,
                                               Tier::SHOTS, 20000, 102);
    CHECK(qasm_t.std_error > 0.0);
    CHECK(std::abs(qasm_t.f_mev - sv_t.f_mev) <= 3.0 * qasm_t.std_error);
    CHECK(qasm_t.to_json().find("\"channel\"") != std::string::npos);
}

TEST_CASE("(1,1) PDF operators match the published coefficients") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto op25 = pdf_operator(0.25, src.catalog, src.params);
    CHECK(std::abs(coeff(op25, "II") - 1.30) <= 0.01);
    CHECK(std::abs(coeff(op25, "IX") - (-1.29)) <= 0.01);
    CHECK(std::abs(coeff(op25, "IZ") - (-0.18)) <= 0.01);
    CHECK(op25.n_terms() == 3);

    const auto op50 = pdf_operator(0.5, src.catalog, src.params);
    CHECK(std::abs(coeff(op50, "II") - 0.78) <= 0.01);
    CHECK(std::abs(coeff(op50, "IZ") - 0.78) <= 0.01);
    CHECK(op50.n_terms() == 2);
}

TEST_CASE("(4,1) PDF operators: frozen oracle values") {
    // values computed from the catalog sum; the corresponding published
    // example operators are inconsistent with the model data (see notes)
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_4_1);
    const auto op50 = pdf_operator(0.5, src.catalog, src.params);
    CHECK(std::abs(coeff(op50, "IIII") - 0.9104) <= 0.01);
    CHECK(std::abs(coeff(op50, "IIIZ") - 0.9104) <= 0.01);
    CHECK(op50.n_terms() == 2);

    const auto op25 = pdf_operator(0.25, src.catalog, src.params);
    CHECK(std::abs(coeff(op25, "IIII") - 1.4314) <= 0.01);
    CHECK(std::abs(coeff(op25, "IIIX") - (-1.3855)) <= 0.01);
    CHECK(std::abs(coeff(op25, "IIIZ") - (-0.3596)) <= 0.01);
    CHECK(op25.n_terms() == 3);
}

TEST_CASE("operator and classical oracle agree on arbitrary states") {
    for (int which = 0; which < 2; ++which) {
        const auto src = builtin_hamiltonian(which ? HamiltonianLabel::builtin_4_1
                                                   : HamiltonianLabel::builtin_1_1);
        const auto eig = exact_eigensolve(src);
        Rng rng(300u + static_cast<unsigned>(which));
        for (double x : {0.1, 0.37, 0.5, 0.82}) {
            const auto op = pdf_operator(x, src.catalog, src.params);
            // exact eigenstates
            for (std::size_t k = 0; k < 2; ++k) {
                const auto v = eigvec(eig, k);
                CHECK(std::abs(expectation_exact(v, op) -
                               classical_pdf(v, src.catalog, src.params, x)) < 1e-9);
            }
            // random normalized state
            std::vector<cxd> v(src.matrix.rows());
            double norm = 0.0;
            for (auto& a : v) {
                a = cxd(rng.uniform(-1, 1), rng.uniform(-1, 1));
                norm += std::norm(a);
            }
            for (auto& a : v) a /= std::sqrt(norm);
            CHECK(std::abs(expectation_exact(v, op) -
                           classical_pdf(v, src.catalog, src.params, x)) < 1e-9);
        }
    }
}

TEST_CASE("single l=0 basis state has pdf chi_0^2 / 4pi") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    std::vector<cxd> v(4, cxd{});
    v[0] = 1.0;
    for (double x : {0.2, 0.5, 0.77}) {
        const double expect = std::pow(chi_l(x, 0, src.params), 2) / (4.0 * M_PI);
        CHECK(classical_pdf(v, src.catalog, src.params, x) == doctest::Approx(expect));
    }
}

TEST_CASE("pdf_scan matches the classical oracle on the exact ground state") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto eig = exact_eigensolve(src);
    const auto ground = eigvec(eig, 0);
    const auto grid = default_pdf_grid(19);
    REQUIRE(grid.front() == doctest::Approx(0.05));
    REQUIRE(grid.back() == doctest::Approx(0.95));

    const auto scan = pdf_scan(ground, src.catalog, src.params, grid, Tier::SV, 0, 0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(std::abs(scan[k].q -
                       classical_pdf(ground, src.catalog, src.params, grid[k])) < 1e-6);
        CHECK(scan[k].q >= -1e-9);  // probability density on a physical state
    }
}

TEST_CASE("pdf normalization under grid quadrature") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto eig = exact_eigensolve(src);
    const auto ground = eigvec(eig, 0);

    const auto scan19 =
        pdf_scan(ground, src.catalog, src.params, default_pdf_grid(19), Tier::SV, 0, 0);
    CHECK(std::abs(grid_norm(scan19) - 1.0) < 1e-2);

    const auto scan199 =
        pdf_scan(ground, src.catalog, src.params, default_pdf_grid(199), Tier::SV, 0, 0);
    CHECK(std::abs(grid_norm(scan199) - 1.0) < 1e-4);
}

TEST_CASE("equal-mass pdf symmetry for low-lying eigenstates of both catalogs") {
    for (int which = 0; which < 2; ++which) {
        const auto src = builtin_hamiltonian(which ? HamiltonianLabel::builtin_4_1
                                                   : HamiltonianLabel::builtin_1_1);
        const auto eig = exact_eigensolve(src);
        for (std::size_t k = 0; k < 2; ++k) {
            const auto v = eigvec(eig, k);
            for (double x : {0.05, 0.21, 0.38}) {
                const double left = classical_pdf(v, src.catalog, src.params, x);
                const double right = classical_pdf(v, src.catalog, src.params, 1.0 - x);
                CHECK(std::abs(left - right) < 1e-6);
            }
        }
    }
}

TEST_CASE("pi and rho PDFs coincide at Lmax = 1") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_4_1);
    const auto eig = exact_eigensolve(src);
    const auto pi = eigvec(eig, 0), rho = eigvec(eig, 1);
    for (double x : {0.2, 0.5, 0.8}) {
        const double qpi = classical_pdf(pi, src.catalog, src.params, x);
        const double qrho = classical_pdf(rho, src.catalog, src.params, x);
        CHECK(std::abs(qpi - qrho) / std::max(1.0, qpi) < 0.05);
    }
}

TEST_CASE("sampled pdf scan stays within errors of the exact one") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto eig = exact_eigensolve(src);
    const auto ground = eigvec(eig, 0);
    const std::vector<double> grid{0.25, 0.5, 0.75};
    const auto exact = pdf_scan(ground, src.catalog, src.params, grid, Tier::SV, 0, 0);
    const auto sampled =
        pdf_scan(ground, src.catalog, src.params, grid, Tier::SHOTS, 20000, 404);
    for (std::size_t k = 0; k < grid.size(); ++k)
        CHECK(std::abs(sampled[k].q - exact[k].q) <=
              std::max(4.0 * sampled[k].std_error, 1e-9));
    CHECK(pdf_to_csv(sampled).find("x,q,std_error\n") == 0);
}

TEST_CASE("domain errors") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    CHECK_THROWS(pdf_operator(0.0, src.catalog, src.params));
    CHECK_THROWS(pdf_operator(1.0, src.catalog, src.params));
    std::vector<cxd> v(4, cxd{0.5, 0.0});
    CHECK_THROWS(classical_pdf(v, src.catalog, src.params, -0.1));
}
