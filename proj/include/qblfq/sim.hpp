#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qblfq/circuit.hpp"
#include "qblfq/matrix.hpp"
#include "qblfq/pauli.hpp"

namespace qblfq {

using QuantumState = std::vector<cxd>;

struct NoiseSpec {
    double readout_p01 = 0.0;  // P(read 1 | prepared 0), per qubit
    double readout_p10 = 0.0;  // P(read 0 | prepared 1)
    double depol_1q = 0.0;     // depolarizing probability per 1-qubit gate
    double depol_2q = 0.0;     // per CX
    std::uint64_t seed = 0;

    bool has_gate_noise() const { return depol_1q > 0.0 || depol_2q > 0.0; }
    bool has_readout_noise() const { return readout_p01 > 0.0 || readout_p10 > 0.0; }
};

struct MitigationFilter {
    Matrix calibration;  // A[observed][prepared], column-stochastic
    int n_qubits = 0;
};

// Per-gate angle override used by the parameter-shift rule.
struct GateShift {
    int gate_index = -1;
    double delta = 0.0;
};

QuantumState apply_circuit(const Circuit& c, std::span<const double> params,
                           std::uint64_t initial_index, const GateShift& shift = {});

double expectation_exact(const QuantumState& state, const PauliOperator& op);

// rho = |psi><psi|
Matrix density_matrix(const QuantumState& state);

// Exact noisy evolution: unitary gates interleaved with depolarizing channels.
Matrix evolve_density(const Circuit& c, std::span<const double> params,
                      std::uint64_t initial_index, const NoiseSpec& noise,
                      const GateShift& shift = {});

// Outcome probabilities, with per-qubit readout flips folded in when noise is set.
std::vector<double> measurement_probabilities(const Circuit& c, std::span<const double> params,
                                              std::uint64_t initial_index,
                                              const NoiseSpec* noise,
                                              const GateShift& shift = {});

struct SampledExpectation {
    double mean = 0.0;
    double std_error = 0.0;
};

SampledExpectation expectation_sampled(const Circuit& c, std::span<const double> params,
                                       std::uint64_t initial_index, const PauliOperator& op,
                                       std::uint64_t shots, std::uint64_t seed,
                                       const NoiseSpec* noise = nullptr,
                                       const MitigationFilter* filter = nullptr);

// Same estimator on an already-prepared state; only readout noise applies.
SampledExpectation expectation_sampled_state(const QuantumState& state, const PauliOperator& op,
                                             std::uint64_t shots, std::uint64_t seed,
                                             const NoiseSpec* noise = nullptr,
                                             const MitigationFilter* filter = nullptr);

MitigationFilter build_calibration_filter(int n_qubits, const NoiseSpec& noise,
                                          std::uint64_t shots_per_state, std::uint64_t seed);

// Nonnegative least squares: argmin_{x >= 0} |A x - b|.
std::vector<double> nnls(const Matrix& a, const std::vector<double>& b);

// CSV "bitstring,count" lines.
std::string counts_to_csv(const std::vector<std::uint64_t>& counts, int n_qubits);

// Density-matrix JSON with basis labels (for Hinton-style plotting).
std::string density_matrix_to_json(const Matrix& rho, const std::vector<std::string>& labels);

}  // namespace qblfq
