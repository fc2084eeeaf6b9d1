#pragma once

#include <string>
#include <vector>

namespace qblfq {

enum class GateKind { RX, RY, RZ, X, H, Sdg, CX };

// Rotation angles resolve to angle + coeff * params[param_index]; fixed gates
// use param_index = -1.
struct Gate {
    GateKind kind = GateKind::X;
    int target = 0;
    int control = -1;        // CX only
    int param_index = -1;
    double coeff = 1.0;
    double angle = 0.0;

    static Gate rx(int target, int param_index, double coeff = 1.0, double angle = 0.0) {
        return {GateKind::RX, target, -1, param_index, coeff, angle};
    }
    static Gate ry(int target, int param_index, double coeff = 1.0, double angle = 0.0) {
        return {GateKind::RY, target, -1, param_index, coeff, angle};
    }
    static Gate rz(int target, int param_index, double coeff = 1.0, double angle = 0.0) {
        return {GateKind::RZ, target, -1, param_index, coeff, angle};
    }
    static Gate rz_fixed(int target, double angle) {
        return {GateKind::RZ, target, -1, -1, 1.0, angle};
    }
    static Gate x(int target) { return {GateKind::X, target}; }
    static Gate h(int target) { return {GateKind::H, target}; }
    static Gate sdg(int target) { return {GateKind::Sdg, target}; }
    static Gate cx(int control, int target) { return {GateKind::CX, target, control}; }

    bool is_rotation() const {
        return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
    }
};

struct Circuit {
    int n_qubits = 0;
    int n_parameters = 0;
    std::vector<Gate> gates;

    void append(const Gate& g);
    // line-per-gate debug dump: GATE target [control] [param_index|angle]
    std::string dump() const;
};

}  // namespace qblfq
