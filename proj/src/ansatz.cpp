#include "qblfq/ansatz.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qblfq {

Circuit build_hea(int n_qubits, int reps) {
    if (n_qubits < 1 || reps < 0) throw std::invalid_argument("build_hea: bad arguments");
    Circuit c;
    c.n_qubits = n_qubits;
    c.n_parameters = 2 * n_qubits * (reps + 1);
    int p = 0;
    for (int layer = 0; layer <= reps; ++layer) {
        for (int q = 0; q < n_qubits; ++q) c.append(Gate::ry(q, p + q));
        for (int q = 0; q < n_qubits; ++q) c.append(Gate::rz(q, p + n_qubits + q));
        p += 2 * n_qubits;
        if (layer < reps)
            for (int q = 0; q + 1 < n_qubits; ++q) c.append(Gate::cx(q, q + 1));
    }
    return c;
}

namespace {

// exp(-i (phi/2) P) for a Z...Z-reduced Pauli string: basis change, CX ladder,
// RZ(phi) on the top involved qubit, then undo. X -> H, Y -> Sdg H.
// phi = coeff * theta_user; involved lists (qubit, factor) pairs.
void append_pauli_exponential(Circuit& c, const std::vector<std::pair<int, char>>& involved,
                              int param_index, double coeff) {
    auto basis_in = [&](int q, char f) {
        if (f == 'X') {
            c.append(Gate::h(q));
        } else if (f == 'Y') {
            c.append(Gate::sdg(q));
            c.append(Gate::h(q));
        }
    };
    auto basis_out = [&](int q, char f) {
        if (f == 'X') {
            c.append(Gate::h(q));
        } else if (f == 'Y') {
            c.append(Gate::h(q));
            // S as three Sdg keeps the circuit inside the gate set with no
            // global-phase residue
            c.append(Gate::sdg(q));
            c.append(Gate::sdg(q));
            c.append(Gate::sdg(q));
        }
    };
    for (const auto& [q, f] : involved) basis_in(q, f);
    for (std::size_t k = 0; k + 1 < involved.size(); ++k)
        c.append(Gate::cx(involved[k].first, involved[k + 1].first));
    c.append(Gate::rz(involved.back().first, param_index, coeff));
    for (std::size_t k = involved.size() - 1; k-- > 0;)
        c.append(Gate::cx(involved[k].first, involved[k + 1].first));
    for (auto it = involved.rbegin(); it != involved.rend(); ++it) basis_out(it->first, it->second);
}

}  // namespace

Circuit build_ucc_single(int n_qubits, int occupied_mode, int trotter_rho) {
    if (occupied_mode < 0 || occupied_mode >= n_qubits)
        throw std::out_of_range("build_ucc_single: occupied mode out of range");
    if (trotter_rho < 1) throw std::invalid_argument("build_ucc_single: trotter_rho must be >= 1");
    Circuit c;
    c.n_qubits = n_qubits;
    c.n_parameters = n_qubits - 1;

    const int r = occupied_mode;
    for (int rep = 0; rep < trotter_rho; ++rep) {
        int param = 0;
        for (int p = 0; p < n_qubits; ++p) {
            if (p == r) continue;
            const int lo = std::min(r, p), hi = std::max(r, p);
            const double sign = (p > r) ? 1.0 : -1.0;
            std::vector<std::pair<int, char>> chain_y, chain_x;
            chain_y.push_back({lo, 'Y'});
            chain_x.push_back({lo, 'X'});
            for (int z = lo + 1; z < hi; ++z) {
                chain_y.push_back({z, 'Z'});
                chain_x.push_back({z, 'Z'});
            }
            chain_y.push_back({hi, 'X'});
            chain_x.push_back({hi, 'Y'});
            // exp(sign i (theta/2rho) Y_lo X_hi Zchain) exp(-sign i (theta/2rho) X_lo Y_hi Zchain)
            append_pauli_exponential(c, chain_y, param, -sign / trotter_rho);
            append_pauli_exponential(c, chain_x, param, +sign / trotter_rho);
            ++param;
        }
    }
    return c;
}

Circuit build_ansatz(const AnsatzSpec& spec) {
    return spec.kind == AnsatzKind::HEA
               ? build_hea(spec.n_qubits, spec.reps)
               : build_ucc_single(spec.n_qubits, spec.occupied_mode, spec.trotter_rho);
}

}  // namespace qblfq
