#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qblfq/blfq.hpp"
#include "qblfq/pauli.hpp"
#include "qblfq/sim.hpp"
#include "qblfq/vqe.hpp"

namespace qblfq {

enum class DecayChannel { pseudoscalar, vector };

// Overlap vector nu over the catalog ordering: nonzero only on m = 0, even-l
// states, sign (-1)^n, antisymmetric (pseudoscalar) or symmetric (vector) in
// the two m = 0 spin configurations.
struct DecayVector {
    DecayChannel channel = DecayChannel::pseudoscalar;
    std::vector<double> components;
};

DecayVector decay_vector(DecayChannel channel, const BasisCatalog& catalog);

// Compact encoding of |nu><nu| (unnormalized nu).
PauliOperator decay_projector(DecayChannel channel, const BasisCatalog& catalog);

struct DecayCalibration {
    double k_mev = 0.0;  // f = K * sqrt(<psi| |nu><nu| |psi>)
};

// K from the light-front current integral evaluated on the exact ground
// eigenvector, divided by its projector overlap. Cached per (source, params).
DecayCalibration calibrate_decay_prefactor(const HamiltonianSource& source);

struct DecayResult {
    DecayChannel channel = DecayChannel::pseudoscalar;
    double f_mev = 0.0;
    double std_error = 0.0;
    double k_mev = 0.0;
    Tier tier = Tier::SV;
    bool clamped = false;  // sampled expectation negative beyond 4 sigma

    std::string to_json() const;
};

DecayResult measure_decay_constant(const QuantumState& state, DecayChannel channel,
                                   const HamiltonianSource& source, Tier tier,
                                   std::uint64_t shots, std::uint64_t seed,
                                   const NoiseSpec* noise = nullptr,
                                   const MitigationFilter* filter = nullptr);

// Compact-encoded basis-projection operator for q(x) at momentum fraction x.
PauliOperator pdf_operator(double x, const BasisCatalog& catalog, const ModelParams& params);

// Direct evaluation of the PDF sum from basis coefficients; the classical
// oracle for pdf_scan.
double classical_pdf(const std::vector<cxd>& coefficients, const BasisCatalog& catalog,
                     const ModelParams& params, double x);

struct PdfPoint {
    double x = 0.0;
    double q = 0.0;
    double std_error = 0.0;
};

std::vector<double> default_pdf_grid(int points = 19);  // evenly spaced in (0,1)

std::vector<PdfPoint> pdf_scan(const QuantumState& state, const BasisCatalog& catalog,
                               const ModelParams& params, const std::vector<double>& x_grid,
                               Tier tier, std::uint64_t shots, std::uint64_t seed,
                               const NoiseSpec* noise = nullptr,
                               const MitigationFilter* filter = nullptr);

std::string pdf_to_csv(const std::vector<PdfPoint>& points);

}  // namespace qblfq
