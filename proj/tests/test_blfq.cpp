#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "qblfq/blfq.hpp"
#include "qblfq/quadrature.hpp"
#include "test_util.hpp"

using namespace qblfq;

TEST_CASE("(1,1) catalog layout") {
    const auto cat = catalog_1_1();
    REQUIRE(cat.size() == 4);
    CHECK(cat.compact_qubits() == 2);
    CHECK(cat.truncation_ok());
    CHECK(cat.mj_uniform());
    CHECK(cat.states[0].mj() == 0);

    // bit 0 carries l, bit 1 the spin configuration. The published encoding
    // table lists the middle two rows with swapped bitstrings; that variant
    // contradicts the published compact PDF operators, the symmetric PDF
    // curves, and the singlet structure of the ground state, so the swapped
    // layout is used here.
    CHECK(cat.states[0] == BlfqState{0, 0, 0, +1, -1});
    CHECK(cat.states[1] == BlfqState{0, 0, 1, +1, -1});
    CHECK(cat.states[2] == BlfqState{0, 0, 0, -1, +1});
    CHECK(cat.states[3] == BlfqState{0, 0, 1, -1, +1});
    CHECK(cat.bitstring(2) == "10");
}

TEST_CASE("(4,1) catalog layout") {
    const auto cat = catalog_4_1();
    REQUIRE(cat.size() == 16);
    CHECK(cat.compact_qubits() == 4);
    CHECK(cat.truncation_ok());
    CHECK(cat.mj_uniform());

    // same 16 states as the published table, indexed by
    // 8*[s=+1/2] + 4*[sbar=+1/2] + 2n + l
    CHECK(cat.states[0] == BlfqState{0, 1, 0, -1, -1});
    CHECK(cat.states[4] == BlfqState{0, 0, 0, -1, +1});
    CHECK(cat.states[8] == BlfqState{0, 0, 0, +1, -1});
    CHECK(cat.states[9] == BlfqState{0, 0, 1, +1, -1});
    CHECK(cat.states[12] == BlfqState{0, -1, 0, +1, +1});
    CHECK(cat.states[15] == BlfqState{1, -1, 1, +1, +1});

    std::set<std::tuple<int, int, int, int, int>> published = {
        {0, 0, 0, 1, -1},  {0, 0, 0, -1, 1},  {0, 0, 1, 1, -1},  {0, 0, 1, -1, 1},
        {0, 1, 0, -1, -1}, {0, 1, 1, -1, -1}, {0, -1, 0, 1, 1},  {0, -1, 1, 1, 1},
        {1, 0, 0, 1, -1},  {1, 0, 0, -1, 1},  {1, 0, 1, 1, -1},  {1, 0, 1, -1, 1},
        {1, 1, 0, -1, -1}, {1, 1, 1, -1, -1}, {1, -1, 0, 1, 1},  {1, -1, 1, 1, 1}};
    std::set<std::tuple<int, int, int, int, int>> ours;
    for (const auto& s : cat.states) ours.insert({s.n, s.m, s.l, s.twos, s.twosbar});
    CHECK(ours == published);
}

TEST_CASE("builtin (1,1) Hamiltonian entries") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    CHECK(src.matrix(0, 2).real() == 25428.0);
    CHECK(src.matrix(1, 3).real() == -15767.0);
    CHECK(src.matrix(0, 0).real() == 568487.0);
    CHECK(src.params.kappa_mev == 560.0);
    CHECK(src.params.mq_mev == 300.0);
    CHECK(src.params.alpha() == doctest::Approx(src.params.beta()));
}

TEST_CASE("exact spectrum of builtin (1,1)") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto eig = exact_eigensolve(src);
    const double expect[4] = {543059, 593915, 1685209, 1716743};
    const double masses[4] = {737, 771, 1298, 1310};
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(eig.values[static_cast<std::size_t>(k)] - expect[k]) <= 1.0);
        CHECK(std::round(std::sqrt(eig.values[static_cast<std::size_t>(k)])) == masses[k]);
    }
    // ground state supported on |00> and |10> with opposite signs
    CHECK(std::abs(std::abs(eig.vectors(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(std::abs(eig.vectors(2, 0)) - 1.0 / std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(eig.vectors(1, 0)) < 1e-9);
    CHECK((eig.vectors(0, 0) * eig.vectors(2, 0)).real() < 0.0);
}

TEST_CASE("(1,1) block structure: l sectors decouple") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto& cat = src.catalog;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (cat.states[static_cast<std::size_t>(i)].l != cat.states[static_cast<std::size_t>(j)].l)
                CHECK(std::abs(src.matrix(static_cast<std::size_t>(i),
                                          static_cast<std::size_t>(j))) == 0.0);
}

TEST_CASE("builtin (4,1) Hamiltonian") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_4_1);
    REQUIRE(src.matrix.rows() == 16);
    CHECK(src.matrix.hermiticity_defect() < 1e-9 * src.matrix.max_abs());
    CHECK(src.params.mq_mev == 380.0);

    const auto eig = exact_eigensolve(src);
    const double expect[4] = {369016, 575707, 737759, 976608};
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(eig.values[static_cast<std::size_t>(k)] - expect[k]) <= 2.0);
}

TEST_CASE("builtin labels by string") {
    CHECK(builtin_hamiltonian("builtin_1_1").catalog.size() == 4);
    CHECK(builtin_hamiltonian("builtin_4_1").catalog.size() == 16);
    CHECK_THROWS(builtin_hamiltonian("builtin_9_9"));
}

TEST_CASE("eigensolver on a diagonal matrix") {
    Matrix d(4, 4);
    for (std::size_t i = 0; i < 4; ++i) d(i, i) = static_cast<double>(i + 1);
    const auto eig = exact_eigensolve(d);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(eig.values[i] == doctest::Approx(static_cast<double>(i + 1)));
        CHECK(std::abs(eig.vectors(i, i)) == doctest::Approx(1.0));
    }
}

TEST_CASE("eigensolver residuals and orthonormality on random Hermitian matrices") {
    for (std::size_t dim : {2u, 3u, 8u, 17u, 32u}) {
        const Matrix h = testutil::random_hermitian(dim, 7u + static_cast<unsigned>(dim), 10.0);
        const auto eig = exact_eigensolve(h);
        double hnorm = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) hnorm += std::norm(h(i, j));
        hnorm = std::sqrt(hnorm);

        for (std::size_t k = 0; k < dim; ++k) {
            std::vector<cxd> v(dim);
            for (std::size_t i = 0; i < dim; ++i) v[i] = eig.vectors(i, k);
            const auto hv = h.apply(v);
            double res = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                res += std::norm(hv[i] - eig.values[k] * v[i]);
            CHECK(std::sqrt(res) <= 1e-8 * hnorm);
        }
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) {
                cxd dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i)
                    dot += std::conj(eig.vectors(i, a)) * eig.vectors(i, b);
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
            }
        for (std::size_t k = 0; k + 1 < dim; ++k) CHECK(eig.values[k] <= eig.values[k + 1]);
    }
}

TEST_CASE("chi_l orthonormality under the quadrature oracle") {
    const auto params = builtin_hamiltonian(HamiltonianLabel::builtin_1_1).params;
    for (int l = 0; l <= 3; ++l)
        for (int lp = l; lp <= 3; ++lp) {
            const double val = integrate_unit_endpoint(
                [&](double x) { return chi_l(x, l, params) * chi_l(x, lp, params); }, 1e-9);
            const double expect = (l == lp) ? 4.0 * M_PI : 0.0;
            CHECK(std::abs(val - expect) < 1e-6);
        }
}

TEST_CASE("chi_l equal-mass parity and positivity") {
    const auto params = builtin_hamiltonian(HamiltonianLabel::builtin_1_1).params;
    for (int l = 0; l <= 3; ++l) {
        const double left = chi_l(0.3, l, params);
        const double right = chi_l(0.7, l, params);
        CHECK(left == doctest::Approx((l % 2 ? -1.0 : 1.0) * right).epsilon(1e-12));
    }
    for (double x : {0.05, 0.3, 0.65, 0.95}) CHECK(chi_l(x, 0, params) > 0.0);
    CHECK_THROWS(chi_l(0.0, 0, params));
    CHECK_THROWS(chi_l(1.0, 0, params));
    CHECK_THROWS(chi_l(0.5, -1, params));
}

TEST_CASE("phi_nm normalization and orthogonality") {
    const double kappa = 560.0;
    // int |phi_00|^2 d^2q / (2pi)^2 = 1, radial quadrature
    auto radial = [&](int n1, int n2) {
        return integrate(
            [&](double q) {
                const cxd a = phi_nm(q, 0.0, n1, 0, kappa);
                const cxd b = phi_nm(q, 0.0, n2, 0, kappa);
                return q * (std::conj(a) * b).real() / (2.0 * M_PI);
            },
            0.0, 12.0 * kappa, 1e-10);
    };
    CHECK(std::abs(radial(0, 0) - 1.0) < 1e-6);
    CHECK(std::abs(radial(1, 1) - 1.0) < 1e-6);
    CHECK(std::abs(radial(0, 1)) < 1e-6);

    CHECK(std::abs(phi_nm(0.0, 0.0, 0, 1, kappa)) == 0.0);
    CHECK(std::abs(phi_nm(0.0, 0.0, 0, -2, kappa)) == 0.0);
    CHECK_THROWS(phi_nm(1.0, 1.0, -1, 0, kappa));
}

TEST_CASE("external Hamiltonian round-trip equals the builtin") {
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    write_hamiltonian_file(src.matrix, "tmp_h11.dat");
    {
        std::FILE* f = std::fopen("tmp_cat11.cat", "w");
        REQUIRE(f);
        for (int i = 0; i < src.catalog.size(); ++i) {
            const auto& s = src.catalog.states[static_cast<std::size_t>(i)];
            std::fprintf(f, "%d %d %d %d %d %d %s\n", i, s.n, s.m, s.l, s.twos, s.twosbar,
                         src.catalog.bitstring(i).c_str());
        }
        std::fclose(f);
    }
    const auto loaded = load_external_hamiltonian("tmp_h11.dat", "tmp_cat11.cat", src.params);
    CHECK(testutil::max_abs_diff(loaded.matrix, src.matrix) == 0.0);
    CHECK(loaded.catalog.states == src.catalog.states);
    CHECK(loaded.label == HamiltonianLabel::external);
}

TEST_CASE("external Hamiltonian rejects non-Hermitian input") {
    std::FILE* f = std::fopen("tmp_bad.dat", "w");
    REQUIRE(f);
    std::fprintf(f, "dim 2 units MeV2\n1 2\n3 4\n");
    std::fclose(f);
    std::FILE* c = std::fopen("tmp_bad.cat", "w");
    REQUIRE(c);
    std::fprintf(c, "0 0 0 0 1 -1 0\n1 0 0 1 1 -1 1\n");
    std::fclose(c);
    CHECK_THROWS(load_external_hamiltonian("tmp_bad.dat", "tmp_bad.cat", ModelParams{}));
}

TEST_CASE("padding leaves the physical spectrum unchanged") {
    const Matrix h = testutil::random_real_symmetric(6, 42u, 100.0);
    const auto before = exact_eigensolve(h);
    const Matrix padded = pad_to_power_of_two(h);
    REQUIRE(padded.rows() == 8);
    const auto after = exact_eigensolve(padded);
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(after.values[k] == doctest::Approx(before.values[k]).epsilon(1e-10));
    CHECK(after.values[6] > before.values[5] + 1000.0);
}
