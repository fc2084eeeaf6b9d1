#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qblfq/ansatz.hpp"
#include "qblfq/blfq.hpp"
#include "qblfq/optimize.hpp"
#include "qblfq/vqe.hpp"

namespace qblfq {

enum class Encoding { direct, compact };
enum class Method { vqe, ssvqe };

// Parsed from the structured key/value config file ([section] + key = value).
// Unknown keys are hard errors.
struct RunConfig {
    // [hamiltonian]
    std::string source = "builtin_1_1";
    std::string matrix_file;
    std::string catalog_file;
    double kappa = 560.0;
    double mq = 300.0;
    Encoding encoding = Encoding::compact;

    // [ansatz]
    AnsatzSpec ansatz;

    // [method]
    Method method = Method::vqe;
    std::uint64_t initial = 0;

    // [ssvqe]
    SsvqeSpec ssvqe = SsvqeSpec::lowest(4);

    // [run]
    Tier tier = Tier::SV;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 20220901;
    std::string output_dir = ".";

    // [noise]
    NoiseSpec noise;
    bool mitigation = false;
    std::uint64_t calibration_shots = 200000;

    // [optimizer]
    OptimizerConfig optimizer;

    // [observables]
    bool decay = false;
    bool pdf = false;
    int pdf_grid = 19;
    std::vector<int> pdf_states = {0, 1};
    bool density = false;

    std::string raw_text;  // snapshot embedded in outputs

    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    HamiltonianSource hamiltonian() const;
    // compact: pad + Hilbert-Schmidt; direct: one-body Jordan-Wigner
    PauliOperator encode_operator(const HamiltonianSource& src) const;
    void validate(const HamiltonianSource& src) const;
};

}  // namespace qblfq
