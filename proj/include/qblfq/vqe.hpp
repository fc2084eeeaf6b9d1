#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qblfq/ansatz.hpp"
#include "qblfq/optimize.hpp"
#include "qblfq/pauli.hpp"
#include "qblfq/sim.hpp"

namespace qblfq {

enum class Tier { SV, SHOTS, NOISY };

struct SsvqeSpec {
    std::vector<std::uint64_t> references;  // distinct computational basis indices
    std::vector<double> weights;            // strictly decreasing, positive
    // "find only the k-th state" weighting: w_i = 1 for i < k, 0 < w_k < 1
    bool kth_state_mode = false;
    double kth_weight = 0.5;

    static SsvqeSpec lowest(int count);  // default weights 1, 0.5, 0.25, 0.125, ...
};

struct StatePoint {
    int iteration = 0;
    double energy = 0.0;
    double std_error = 0.0;
};

struct StateResult {
    std::uint64_t reference = 0;
    std::string reference_bitstring;
    double energy_mev2 = 0.0;
    double mass_mev = 0.0;
    double std_error = 0.0;
    QuantumState final_state;  // reconstructed with the noiseless simulator
    std::vector<StatePoint> trace;

    std::string trace_csv() const;  // iteration,E_i,std_error
};

struct SpectrumResult {
    std::vector<StateResult> states;  // ordered by weight rank
    OptTrace optimizer_trace;
    Circuit circuit;
    std::vector<double> final_params;
    Tier tier = Tier::SV;
    std::uint64_t seed = 0;
};

struct RunSettings {
    Tier tier = Tier::SV;
    std::uint64_t shots = 8192;
    NoiseSpec noise;
    bool mitigation = false;
    std::uint64_t calibration_shots = 100000;
};

SpectrumResult run_vqe(const PauliOperator& hamiltonian, const AnsatzSpec& ansatz,
                       std::uint64_t initial, const RunSettings& settings,
                       const OptimizerConfig& optimizer, std::uint64_t seed);

SpectrumResult run_ssvqe(const PauliOperator& hamiltonian, const AnsatzSpec& ansatz,
                         const SsvqeSpec& spec, const RunSettings& settings,
                         const OptimizerConfig& optimizer, std::uint64_t seed);

const QuantumState& final_state(const SpectrumResult& result, int index);

}  // namespace qblfq
