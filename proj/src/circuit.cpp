#include "qblfq/circuit.hpp"

#include <cstdio>
#include <stdexcept>

namespace qblfq {

namespace {
const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::X: return "X";
        case GateKind::H: return "H";
        case GateKind::Sdg: return "SDG";
        case GateKind::CX: return "CX";
    }
    return "?";
}
}  // namespace

void Circuit::append(const Gate& g) {
    if (g.target < 0 || g.target >= n_qubits)
        throw std::out_of_range("gate target out of range");
    if (g.kind == GateKind::CX) {
        if (g.control < 0 || g.control >= n_qubits)
            throw std::out_of_range("gate control out of range");
        if (g.control == g.target) throw std::invalid_argument("CX control == target");
    }
    if (g.param_index >= n_parameters)
        throw std::out_of_range("gate parameter index out of range");
    gates.push_back(g);
}

std::string Circuit::dump() const {
    std::string out;
    char buf[96];
    for (const auto& g : gates) {
        if (g.kind == GateKind::CX) {
            std::snprintf(buf, sizeof buf, "CX %d %d\n", g.target, g.control);
        } else if (g.is_rotation() && g.param_index >= 0) {
            std::snprintf(buf, sizeof buf, "%s %d p%d*%.17g%+.17g\n", kind_name(g.kind),
                          g.target, g.param_index, g.coeff, g.angle);
        } else if (g.is_rotation()) {
            std::snprintf(buf, sizeof buf, "%s %d %.17g\n", kind_name(g.kind), g.target, g.angle);
        } else {
            std::snprintf(buf, sizeof buf, "%s %d\n", kind_name(g.kind), g.target);
        }
        out += buf;
    }
    return out;
}

}  // namespace qblfq
