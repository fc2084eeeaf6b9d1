#pragma once

#include <string>
#include <vector>

#include "qblfq/matrix.hpp"
#include "qblfq/pauli.hpp"

namespace qblfq {

// One valence basis state. Spins are stored doubled (+1 = +1/2).
struct BlfqState {
    int n = 0;        // radial
    int m = 0;        // orbital projection
    int l = 0;        // longitudinal
    int twos = 1;     // 2s
    int twosbar = -1; // 2s-bar

    int mj() const { return m + (twos + twosbar) / 2; }
    bool operator==(const BlfqState&) const = default;
};

struct ModelParams {
    double kappa_mev = 0.0;  // confining strength
    double mq_mev = 0.0;     // quark mass (equal-mass SU(2) limit)
    int nf = 3;
    double alpha_s0 = 0.89;

    // Jacobi parameters; alpha == beta in the equal-mass limit
    double alpha() const { return 2.0 * mq_mev * (mq_mev + mq_mev) / (kappa_mev * kappa_mev); }
    double beta() const { return alpha(); }
};

// Ordered basis states; the list position IS the matrix index, the compact
// bitstring, and the direct-encoding mode index.
struct BasisCatalog {
    int nmax = 0;
    int lmax = 0;
    std::vector<BlfqState> states;

    int size() const { return static_cast<int>(states.size()); }
    int compact_qubits() const;
    std::string bitstring(int index) const;  // |q_{n-1} ... q_0>

    bool truncation_ok() const;  // every state obeys 2n + |m| + 1 <= Nmax, 0 <= l <= Lmax
    bool mj_uniform() const;
};

enum class HamiltonianLabel { builtin_1_1, builtin_4_1, external };

struct HamiltonianSource {
    HamiltonianLabel label = HamiltonianLabel::external;
    Matrix matrix;  // dense Hermitian, MeV^2
    BasisCatalog catalog;
    ModelParams params;
};

BasisCatalog catalog_1_1();
BasisCatalog catalog_4_1();

// Compact operator for (Nmax, Lmax) = (4, 1), with transcription repairs
// described in the repository notes; reconstructs to builtin_4_1's matrix.
const PauliOperator& builtin_4_1_operator();

HamiltonianSource builtin_hamiltonian(HamiltonianLabel label);
HamiltonianSource builtin_hamiltonian(const std::string& label);

// File format: header "dim N units MeV2", then N rows of N real entries.
// Catalog file: one line per state "index n m l 2s 2sbar bitstring".
HamiltonianSource load_external_hamiltonian(const std::string& matrix_path,
                                            const std::string& catalog_path,
                                            ModelParams params);
BasisCatalog load_catalog_file(const std::string& path);
void write_hamiltonian_file(const Matrix& h, const std::string& path);

// Zero-pad to the next power of two; padded rows get a large diagonal penalty
// so the low-lying physical spectrum is untouched.
Matrix pad_to_power_of_two(const Matrix& h);

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // orthonormal columns, vectors(i, k) = <i|v_k>
};

// Cyclic-Jacobi diagonalization of a Hermitian matrix (dim <= 4096).
EigenSystem exact_eigensolve(const Matrix& h);
inline EigenSystem exact_eigensolve(const HamiltonianSource& src) {
    return exact_eigensolve(src.matrix);
}

// Longitudinal basis function chi_l(x; alpha, beta), normalized so that
// int_0^1 chi_l chi_l' dx = 4 pi delta_ll'. Requires 0 < x < 1.
double chi_l(double x, int l, const ModelParams& params);

// 2D harmonic-oscillator transverse basis function phi_nm(q_perp), with
// int |phi_nm|^2 d^2q / (2 pi)^2 = 1.
cxd phi_nm(double qx_mev, double qy_mev, int n, int m, double kappa_mev);

}  // namespace qblfq
