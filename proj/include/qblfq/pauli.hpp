#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qblfq/matrix.hpp"

namespace qblfq {

enum class PauliFactor : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Tensor product of single-qubit Pauli matrices. factors[k] acts on qubit k
// (qubit 0 = least-significant bit of the basis-state index). The display
// string lists the highest-index qubit first.
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(int n_qubits)
        : factors_(static_cast<std::size_t>(n_qubits), PauliFactor::I) {}
    PauliString(int n_qubits, const std::string& text);  // list form, e.g. "XZ"

    int n_qubits() const { return static_cast<int>(factors_.size()); }
    PauliFactor factor(int qubit) const { return factors_[static_cast<std::size_t>(qubit)]; }
    void set_factor(int qubit, PauliFactor f) { factors_[static_cast<std::size_t>(qubit)] = f; }

    bool is_identity() const;
    int weight() const;  // number of non-identity factors

    // bit masks over qubits
    std::uint64_t x_mask() const;  // set where factor flips the bit (X or Y)
    std::uint64_t z_mask() const;  // set where factor carries a bit phase (Z or Y)
    int y_count() const;

    std::string to_string() const;  // highest qubit first
    static PauliString from_string(const std::string& text);

    auto operator<=>(const PauliString&) const = default;

private:
    std::vector<PauliFactor> factors_;
};

struct PauliProduct {
    cxd phase;  // one of {1, -1, i, -i}
    PauliString string;
};

// phase * string == matrix product a.b
PauliProduct multiply(const PauliString& a, const PauliString& b);

// true iff the single-qubit factors commute on every qubit
bool commutes_qubitwise(const PauliString& a, const PauliString& b);

// P |j> = phase(j) |j ^ x_mask>; returns the phase for basis index j.
cxd pauli_basis_phase(const PauliString& p, std::uint64_t j);

// Weighted sum of Pauli strings. Hamiltonians carry MeV^2 coefficients,
// projectors are dimensionless.
class PauliOperator {
public:
    PauliOperator() = default;
    explicit PauliOperator(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    const std::map<PauliString, cxd>& terms() const { return terms_; }
    std::size_t n_terms() const { return terms_.size(); }

    void add_term(const PauliString& s, cxd coeff);
    cxd coefficient(const PauliString& s) const;

    PauliOperator& operator+=(const PauliOperator& o);
    PauliOperator& operator*=(cxd s);

    double max_abs_coefficient() const;
    // drop terms below rel_tol * max|coeff| (default 1e-12 relative)
    void prune(double rel_tol = 1e-12);

    bool is_hermitian(double tol = 1e-9) const;  // all coefficients real
    PauliOperator adjoint() const;

    std::string to_text() const;  // one term per line: "<coefficient> <string>"
    static PauliOperator from_text(const std::string& text);

private:
    int n_qubits_ = 0;
    std::map<PauliString, cxd> terms_;
};

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);

// Greedy first-fit grouping of mutually qubit-wise-commuting terms,
// descending |coefficient| (ties broken by string order). Every term lands in
// exactly one group.
struct PauliTerm {
    PauliString string;
    cxd coefficient;
};
std::vector<std::vector<PauliTerm>> group_commuting(const PauliOperator& op);

// Jordan-Wigner ladder operators on n modes (one qubit per mode):
//   lower:  Z_(0..j-1) (x) (X_j + i Y_j)/2,   raise = adjoint
PauliOperator jw_lower(int mode, int n_qubits);
PauliOperator jw_raise(int mode, int n_qubits);

// sum_ij h_ij a_i^dag a_j for a Hermitian one-body coefficient matrix,
// one qubit per mode (direct encoding).
PauliOperator jw_encode_one_body(const Matrix& h);

// Hilbert-Schmidt expansion: (1/N) sum_alpha Tr(P_alpha H) P_alpha.
// H must be Hermitian with power-of-two dimension.
PauliOperator compact_encode(const Matrix& h, double rel_drop_tol = 1e-12);

// Dense 2^n x 2^n matrix of the operator. Guarded by a qubit cap.
Matrix reconstruct_matrix(const PauliOperator& op, int max_qubits = 12);

}  // namespace qblfq
