#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qblfq/circuit.hpp"

namespace qblfq {

// evaluate(params, eval_seed) must be repeatable for fixed arguments.
struct ObjectiveHandle {
    std::function<double(std::span<const double>, std::uint64_t)> evaluate;
    int dimension = 0;
    bool deterministic = true;
    double cost_scale = 1.0;  // internal rescale; results are reported unscaled
    // exact gradient for deterministic objectives (parameter-shift); optional
    std::function<std::vector<double>(std::span<const double>)> gradient;
    // measurement uncertainty of the latest evaluate() at these params; optional
    std::function<double(std::span<const double>, std::uint64_t)> std_error;
};

enum class OptimizerKind { SPSA, SIMPLEX, GRAD };

struct SpsaSchedule {
    double a = 0.0;  // 0 = calibrate so the first step is ~0.1 rad
    double c = 0.1;
    double big_a = -1.0;  // 0.1 * max_iterations when negative
    double alpha = 0.602;
    double gamma = 0.101;
};

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::GRAD;
    int max_iterations = 500;
    double tolerance = 1e-10;
    SpsaSchedule spsa;
    int restarts = 5;
    double init_lo = -3.14159265358979323846;
    double init_hi = 3.14159265358979323846;
};

struct IterRecord {
    int iteration = 0;
    std::uint64_t params_hash = 0;
    double cost = 0.0;
    double std_error = 0.0;
};

struct OptTrace {
    std::vector<IterRecord> records;
    std::vector<double> final_params;
    double final_cost = 0.0;
    std::string termination;
    int restart_index = 0;

    std::string to_csv() const;  // iteration,cost,std_error
};

OptTrace minimize(const ObjectiveHandle& obj, const OptimizerConfig& cfg, std::uint64_t seed);

// Parameter-shift rule, applied per gate occurrence (exact for RX/RY/RZ
// generators, including parameters shared across gates):
//   dE/dtheta_k = sum_g coeff_g * (E(angle_g + pi/2) - E(angle_g - pi/2)) / 2
// eval_shifted(params, gate_index, delta) evaluates with one gate's angle offset.
using GateShiftEval =
    std::function<double(std::span<const double>, int gate_index, double delta)>;
std::vector<double> parameter_shift_gradient(const Circuit& circuit,
                                             const GateShiftEval& eval_shifted,
                                             std::span<const double> params);

}  // namespace qblfq
