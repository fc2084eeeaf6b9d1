#pragma once

#include "qblfq/circuit.hpp"

namespace qblfq {

enum class AnsatzKind { HEA, UCC_single };

struct AnsatzSpec {
    AnsatzKind kind = AnsatzKind::HEA;
    int n_qubits = 2;
    int reps = 1;           // HEA repetition layers
    int occupied_mode = 0;  // UCC reference occupation
    int trotter_rho = 1;    // UCC trotter number

    int parameter_count() const {
        return kind == AnsatzKind::HEA ? 2 * n_qubits * (reps + 1) : n_qubits - 1;
    }
};

// Hardware-efficient SU(2) two-local: (reps+1) rotation layers of RY then RZ
// on every qubit, linear CX entanglement between layers. 2n(reps+1) parameters.
Circuit build_hea(int n_qubits, int reps);

// Single-excitation UCC under Jordan-Wigner from a one-hot reference:
// for each virtual mode p != r, the trotterized exponential of
// theta_p (a_p^dag a_r - a_r^dag a_p) realized as two Pauli-string
// exponentials. n_qubits - 1 parameters.
Circuit build_ucc_single(int n_qubits, int occupied_mode, int trotter_rho = 1);

Circuit build_ansatz(const AnsatzSpec& spec);

}  // namespace qblfq
