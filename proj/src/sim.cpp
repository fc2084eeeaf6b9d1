#include "qblfq/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "qblfq/rng.hpp"

namespace qblfq {

namespace {

struct Mat2 {
    cxd u00, u01, u10, u11;
};

Mat2 gate_matrix(const Gate& g, double theta) {
    switch (g.kind) {
        case GateKind::RX: {
            const double c = std::cos(theta / 2), s = std::sin(theta / 2);
            return {c, cxd(0, -s), cxd(0, -s), c};
        }
        case GateKind::RY: {
            const double c = std::cos(theta / 2), s = std::sin(theta / 2);
            return {c, -s, s, c};
        }
        case GateKind::RZ:
            return {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            return {r, r, r, -r};
        }
        case GateKind::Sdg:
            return {1.0, 0.0, 0.0, cxd(0.0, -1.0)};
        default:
            throw std::logic_error("gate_matrix: not a 1-qubit gate");
    }
}

double resolved_angle(const Gate& g, std::span<const double> params, int gate_index,
                      const GateShift& shift) {
    double theta = g.angle;
    if (g.param_index >= 0) theta += g.coeff * params[static_cast<std::size_t>(g.param_index)];
    if (shift.gate_index == gate_index) theta += shift.delta;
    return theta;
}

void apply_1q(QuantumState& psi, int q, const Mat2& u) {
    const std::uint64_t bit = 1ULL << q;
    const std::uint64_t dim = psi.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cxd a = psi[i], b = psi[i | bit];
        psi[i] = u.u00 * a + u.u01 * b;
        psi[i | bit] = u.u10 * a + u.u11 * b;
    }
}

void apply_cx(QuantumState& psi, int control, int target) {
    const std::uint64_t cbit = 1ULL << control, tbit = 1ULL << target;
    const std::uint64_t dim = psi.size();
    for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & cbit) && !(i & tbit)) std::swap(psi[i], psi[i | tbit]);
}

void apply_gate(QuantumState& psi, const Gate& g, std::span<const double> params,
                int gate_index, const GateShift& shift) {
    if (g.kind == GateKind::CX) {
        apply_cx(psi, g.control, g.target);
    } else {
        apply_1q(psi, g.target, gate_matrix(g, resolved_angle(g, params, gate_index, shift)));
    }
}

// rho -> U rho U^dag for a 1-qubit gate
void conjugate_1q(Matrix& rho, int q, const Mat2& u) {
    const std::size_t dim = rho.rows();
    const std::uint64_t bit = 1ULL << q;
    // left multiply
    for (std::size_t j = 0; j < dim; ++j)
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const cxd a = rho(i, j), b = rho(i | bit, j);
            rho(i, j) = u.u00 * a + u.u01 * b;
            rho(i | bit, j) = u.u10 * a + u.u11 * b;
        }
    // right multiply by U^dag
    for (std::size_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j) {
            if (j & bit) continue;
            const cxd a = rho(i, j), b = rho(i, j | bit);
            rho(i, j) = a * std::conj(u.u00) + b * std::conj(u.u01);
            rho(i, j | bit) = a * std::conj(u.u10) + b * std::conj(u.u11);
        }
}

void conjugate_cx(Matrix& rho, int control, int target) {
    const std::size_t dim = rho.rows();
    const std::uint64_t cbit = 1ULL << control, tbit = 1ULL << target;
    for (std::size_t j = 0; j < dim; ++j)
        for (std::uint64_t i = 0; i < dim; ++i)
            if ((i & cbit) && !(i & tbit)) std::swap(rho(i, j), rho(i | tbit, j));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j)
            if ((j & cbit) && !(j & tbit)) std::swap(rho(i, j), rho(i, j | tbit));
}

// depolarizing channel via rho -> (1 - 4p/3) rho + (4p/3) (I_q/2 tensor Tr_q rho)
void depolarize_1q(Matrix& rho, int q, double p) {
    if (p <= 0.0) return;
    const double keep = 1.0 - 4.0 * p / 3.0;
    const double mix = 4.0 * p / 3.0;
    const std::size_t dim = rho.rows();
    const std::uint64_t bit = 1ULL << q;
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        for (std::uint64_t j = 0; j < dim; ++j) {
            if (j & bit) continue;
            const cxd r00 = rho(i, j), r01 = rho(i, j | bit);
            const cxd r10 = rho(i | bit, j), r11 = rho(i | bit, j | bit);
            const cxd avg = 0.5 * (r00 + r11);
            rho(i, j) = keep * r00 + mix * avg;
            rho(i | bit, j | bit) = keep * r11 + mix * avg;
            rho(i, j | bit) = keep * r01;
            rho(i | bit, j) = keep * r10;
        }
    }
}

void depolarize_2q(Matrix& rho, int qa, int qb, double p) {
    if (p <= 0.0) return;
    const double keep = 1.0 - 16.0 * p / 15.0;
    const double mix = 16.0 * p / 15.0;
    const std::size_t dim = rho.rows();
    const std::uint64_t ba = 1ULL << qa, bb = 1ULL << qb;
    const std::uint64_t mask = ba | bb;
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        for (std::uint64_t j = 0; j < dim; ++j) {
            if (j & mask) continue;
            const std::uint64_t subs[4] = {0, ba, bb, ba | bb};
            cxd tr = 0.0;
            for (auto s : subs) tr += rho(i | s, j | s);
            tr *= 0.25;
            for (auto si : subs)
                for (auto sj : subs) {
                    cxd v = keep * rho(i | si, j | sj);
                    if (si == sj) v += mix * tr;
                    rho(i | si, j | sj) = v;
                }
        }
    }
}

void readout_transform(std::vector<double>& probs, int n_qubits, double p01, double p10) {
    if (p01 <= 0.0 && p10 <= 0.0) return;
    const std::uint64_t dim = probs.size();
    for (int q = 0; q < n_qubits; ++q) {
        const std::uint64_t bit = 1ULL << q;
        for (std::uint64_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const double a = probs[i], b = probs[i | bit];
            probs[i] = (1.0 - p01) * a + p10 * b;
            probs[i | bit] = p01 * a + (1.0 - p10) * b;
        }
    }
}

struct GroupStat {
    double mean = 0.0;
    double variance = 0.0;  // variance of the mean
};

// one multinomial draw per group; value per observed bitstring is the
// coefficient-weighted parity sum over the group's terms
GroupStat measure_group(const std::vector<PauliTerm>& group, const std::vector<double>& probs,
                        std::uint64_t shots, std::uint64_t group_seed,
                        const MitigationFilter* filter) {
    const std::uint64_t dim = probs.size();
    std::vector<double> values(dim, 0.0);
    for (const auto& t : group) {
        const std::uint64_t support = t.string.x_mask() | t.string.z_mask();
        const double c = t.coefficient.real();
        for (std::uint64_t b = 0; b < dim; ++b)
            values[b] += (std::popcount(b & support) & 1) ? -c : c;
    }

    Rng rng(group_seed);
    const auto counts = multinomial(probs, shots, rng);

    std::vector<double> weight(dim);
    double total = 0.0;
    if (filter) {
        std::vector<double> observed(dim);
        for (std::uint64_t b = 0; b < dim; ++b)
            observed[b] = static_cast<double>(counts[b]) / static_cast<double>(shots);
        auto corrected = nnls(filter->calibration, observed);
        for (std::uint64_t b = 0; b < dim; ++b) {
            weight[b] = corrected[b];
            total += corrected[b];
        }
    } else {
        for (std::uint64_t b = 0; b < dim; ++b) {
            weight[b] = static_cast<double>(counts[b]);
            total += weight[b];
        }
    }
    if (total <= 0.0) return {0.0, 0.0};

    double mean = 0.0, second = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
        const double w = weight[b] / total;
        mean += w * values[b];
        second += w * values[b] * values[b];
    }
    const double var_sample = std::max(0.0, second - mean * mean);
    return {mean, var_sample / static_cast<double>(shots)};
}

std::vector<Gate> basis_change_gates(const std::vector<PauliTerm>& group, int n_qubits) {
    std::vector<Gate> gates;
    for (int q = 0; q < n_qubits; ++q) {
        PauliFactor f = PauliFactor::I;
        for (const auto& t : group) {
            const auto tf = t.string.factor(q);
            if (tf != PauliFactor::I) {
                f = tf;
                break;
            }
        }
        if (f == PauliFactor::X) {
            gates.push_back(Gate::h(q));
        } else if (f == PauliFactor::Y) {
            gates.push_back(Gate::sdg(q));
            gates.push_back(Gate::h(q));
        }
    }
    return gates;
}

SampledExpectation sample_operator(
    const PauliOperator& op, std::uint64_t shots, std::uint64_t seed,
    const MitigationFilter* filter,
    const std::function<std::vector<double>(const std::vector<Gate>&)>& probs_for_group) {
    if (shots < 1) throw std::invalid_argument("expectation_sampled: shots must be >= 1");
    if (!op.is_hermitian()) throw std::invalid_argument("sampled expectation needs a Hermitian operator");
    if (filter && filter->n_qubits != op.n_qubits())
        throw std::invalid_argument("mitigation filter qubit count mismatch");

    double mean = 0.0, var = 0.0;
    PauliOperator rest(op.n_qubits());
    for (const auto& [s, c] : op.terms()) {
        if (s.is_identity())
            mean += c.real();
        else
            rest.add_term(s, c);
    }

    const auto groups = group_commuting(rest);
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto probs = probs_for_group(basis_change_gates(groups[k], op.n_qubits()));
        const auto stat = measure_group(groups[k], probs, shots,
                                        derive_seed({seed, 0x67726f75ULL, k}), filter);
        mean += stat.mean;
        var += stat.variance;
    }
    return {mean, std::sqrt(var)};
}

}  // namespace

QuantumState apply_circuit(const Circuit& c, std::span<const double> params,
                           std::uint64_t initial_index, const GateShift& shift) {
    if (static_cast<int>(params.size()) != c.n_parameters)
        throw std::invalid_argument("apply_circuit: parameter count mismatch");
    const std::uint64_t dim = 1ULL << c.n_qubits;
    if (initial_index >= dim) throw std::out_of_range("apply_circuit: bad initial index");
    QuantumState psi(dim, cxd{});
    psi[initial_index] = 1.0;
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi)
        apply_gate(psi, c.gates[gi], params, static_cast<int>(gi), shift);
    return psi;
}

double expectation_exact(const QuantumState& state, const PauliOperator& op) {
    if (state.size() != (1ULL << op.n_qubits()))
        throw std::invalid_argument("expectation_exact: dimension mismatch");
    if (!op.is_hermitian())
        throw std::invalid_argument("expectation_exact: operator must be Hermitian");
    cxd acc = 0.0;
    for (const auto& [s, c] : op.terms()) {
        const std::uint64_t xm = s.x_mask();
        cxd val = 0.0;
        for (std::uint64_t k = 0; k < state.size(); ++k)
            val += std::conj(state[k ^ xm]) * pauli_basis_phase(s, k) * state[k];
        acc += c * val;
    }
    return acc.real();
}

Matrix density_matrix(const QuantumState& state) {
    const std::size_t dim = state.size();
    Matrix rho(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) rho(i, j) = state[i] * std::conj(state[j]);
    return rho;
}

Matrix evolve_density(const Circuit& c, std::span<const double> params,
                      std::uint64_t initial_index, const NoiseSpec& noise,
                      const GateShift& shift) {
    if (static_cast<int>(params.size()) != c.n_parameters)
        throw std::invalid_argument("evolve_density: parameter count mismatch");
    const std::size_t dim = 1ULL << c.n_qubits;
    if (initial_index >= dim) throw std::out_of_range("evolve_density: bad initial index");
    Matrix rho(dim, dim);
    rho(initial_index, initial_index) = 1.0;
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
        const Gate& g = c.gates[gi];
        if (g.kind == GateKind::CX) {
            conjugate_cx(rho, g.control, g.target);
            depolarize_2q(rho, g.control, g.target, noise.depol_2q);
        } else {
            conjugate_1q(rho, g.target,
                         gate_matrix(g, resolved_angle(g, params, static_cast<int>(gi), shift)));
            depolarize_1q(rho, g.target, noise.depol_1q);
        }
    }
    return rho;
}

std::vector<double> measurement_probabilities(const Circuit& c, std::span<const double> params,
                                              std::uint64_t initial_index,
                                              const NoiseSpec* noise, const GateShift& shift) {
    const std::uint64_t dim = 1ULL << c.n_qubits;
    std::vector<double> probs(dim);
    if (noise && noise->has_gate_noise()) {
        const Matrix rho = evolve_density(c, params, initial_index, *noise, shift);
        for (std::uint64_t i = 0; i < dim; ++i) probs[i] = std::max(0.0, rho(i, i).real());
    } else {
        const QuantumState psi = apply_circuit(c, params, initial_index, shift);
        for (std::uint64_t i = 0; i < dim; ++i) probs[i] = std::norm(psi[i]);
    }
    if (noise) readout_transform(probs, c.n_qubits, noise->readout_p01, noise->readout_p10);
    return probs;
}

SampledExpectation expectation_sampled(const Circuit& c, std::span<const double> params,
                                       std::uint64_t initial_index, const PauliOperator& op,
                                       std::uint64_t shots, std::uint64_t seed,
                                       const NoiseSpec* noise, const MitigationFilter* filter) {
    if (op.n_qubits() != c.n_qubits)
        throw std::invalid_argument("expectation_sampled: qubit count mismatch");
    return sample_operator(op, shots, seed, filter, [&](const std::vector<Gate>& basis) {
        Circuit measured = c;
        for (const auto& g : basis) measured.append(g);
        return measurement_probabilities(measured, params, initial_index, noise);
    });
}

SampledExpectation expectation_sampled_state(const QuantumState& state, const PauliOperator& op,
                                             std::uint64_t shots, std::uint64_t seed,
                                             const NoiseSpec* noise,
                                             const MitigationFilter* filter) {
    if (state.size() != (1ULL << op.n_qubits()))
        throw std::invalid_argument("expectation_sampled_state: dimension mismatch");
    const int n = op.n_qubits();
    return sample_operator(op, shots, seed, filter, [&](const std::vector<Gate>& basis) {
        QuantumState psi = state;
        for (std::size_t gi = 0; gi < basis.size(); ++gi)
            apply_gate(psi, basis[gi], {}, static_cast<int>(gi), {});
        std::vector<double> probs(psi.size());
        for (std::size_t i = 0; i < psi.size(); ++i) probs[i] = std::norm(psi[i]);
        if (noise) readout_transform(probs, n, noise->readout_p01, noise->readout_p10);
        return probs;
    });
}

MitigationFilter build_calibration_filter(int n_qubits, const NoiseSpec& noise,
                                          std::uint64_t shots_per_state, std::uint64_t seed) {
    if (n_qubits > 6)
        throw std::invalid_argument("build_calibration_filter: qubit cap is 6");
    const std::uint64_t dim = 1ULL << n_qubits;
    MitigationFilter filter;
    filter.n_qubits = n_qubits;
    filter.calibration = Matrix(dim, dim);
    for (std::uint64_t prepared = 0; prepared < dim; ++prepared) {
        Circuit c;
        c.n_qubits = n_qubits;
        for (int q = 0; q < n_qubits; ++q)
            if (prepared & (1ULL << q)) c.append(Gate::x(q));
        auto probs = measurement_probabilities(c, {}, 0, &noise);
        Rng rng(derive_seed({seed, 0x63616cULL, prepared}));
        const auto counts = multinomial(probs, shots_per_state, rng);
        for (std::uint64_t observed = 0; observed < dim; ++observed)
            filter.calibration(observed, prepared) =
                static_cast<double>(counts[observed]) / static_cast<double>(shots_per_state);
    }
    return filter;
}

std::vector<double> nnls(const Matrix& a, const std::vector<double>& b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (b.size() != m) throw std::invalid_argument("nnls: dimension mismatch");

    std::vector<double> x(n, 0.0);
    std::vector<bool> passive(n, false);

    auto residual = [&] {
        std::vector<double> r(m);
        for (std::size_t i = 0; i < m; ++i) {
            double acc = b[i];
            for (std::size_t j = 0; j < n; ++j) acc -= a(i, j).real() * x[j];
            r[i] = acc;
        }
        return r;
    };

    // least squares restricted to the passive set, via normal equations
    auto solve_passive = [&](std::vector<double>& z) {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j)
            if (passive[j]) idx.push_back(j);
        const std::size_t k = idx.size();
        z.assign(n, 0.0);
        if (k == 0) return;
        std::vector<double> ata(k * k, 0.0), atb(k, 0.0);
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t q = p; q < k; ++q) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    acc += a(i, idx[p]).real() * a(i, idx[q]).real();
                ata[p * k + q] = ata[q * k + p] = acc;
            }
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc += a(i, idx[p]).real() * b[i];
            atb[p] = acc;
        }
        // Gaussian elimination with partial pivoting
        std::vector<double> sol = atb;
        for (std::size_t col = 0; col < k; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < k; ++r)
                if (std::abs(ata[r * k + col]) > std::abs(ata[piv * k + col])) piv = r;
            if (std::abs(ata[piv * k + col]) < 1e-14) continue;
            if (piv != col) {
                for (std::size_t cc = 0; cc < k; ++cc) std::swap(ata[piv * k + cc], ata[col * k + cc]);
                std::swap(sol[piv], sol[col]);
            }
            for (std::size_t r = col + 1; r < k; ++r) {
                const double f = ata[r * k + col] / ata[col * k + col];
                for (std::size_t cc = col; cc < k; ++cc) ata[r * k + cc] -= f * ata[col * k + cc];
                sol[r] -= f * sol[col];
            }
        }
        for (std::size_t col = k; col-- > 0;) {
            double acc = sol[col];
            for (std::size_t cc = col + 1; cc < k; ++cc) acc -= ata[col * k + cc] * sol[cc];
            sol[col] = (std::abs(ata[col * k + col]) < 1e-14) ? 0.0 : acc / ata[col * k + col];
        }
        for (std::size_t p = 0; p < k; ++p) z[idx[p]] = sol[p];
    };

    const double tol = 1e-12;
    for (std::size_t outer = 0; outer < 4 * n; ++outer) {
        const auto r = residual();
        std::vector<double> w(n, 0.0);
        double wmax = -1.0;
        std::size_t jmax = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (passive[j]) continue;
            for (std::size_t i = 0; i < m; ++i) w[j] += a(i, j).real() * r[i];
            if (w[j] > wmax) {
                wmax = w[j];
                jmax = j;
            }
        }
        if (jmax == n || wmax <= tol) break;
        passive[jmax] = true;

        std::vector<double> z;
        solve_passive(z);
        for (std::size_t inner = 0; inner < 4 * n; ++inner) {
            bool all_pos = true;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) all_pos = false;
            if (all_pos) break;
            double alpha = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0)
                    alpha = std::min(alpha, x[j] / (x[j] - z[j]));
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j]) x[j] += alpha * (z[j] - x[j]);
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && x[j] <= tol) {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            solve_passive(z);
        }
        for (std::size_t j = 0; j < n; ++j) x[j] = passive[j] ? std::max(0.0, z[j]) : 0.0;
    }
    return x;
}

std::string counts_to_csv(const std::vector<std::uint64_t>& counts, int n_qubits) {
    std::string out = "bitstring,count\n";
    char buf[96];
    for (std::size_t i = 0; i < counts.size(); ++i) {
        std::string bits(static_cast<std::size_t>(n_qubits), '0');
        for (int q = 0; q < n_qubits; ++q)
            if (i & (1ULL << q)) bits[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
        std::snprintf(buf, sizeof buf, "%s,%llu\n", bits.c_str(),
                      static_cast<unsigned long long>(counts[i]));
        out += buf;
    }
    return out;
}

std::string density_matrix_to_json(const Matrix& rho, const std::vector<std::string>& labels) {
    std::string out = "{\n  \"basis_labels\": [";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out += "\"" + labels[i] + "\"";
        if (i + 1 < labels.size()) out += ", ";
    }
    out += "],\n";
    char buf[48];
    for (const char* part : {"real", "imag"}) {
        out += std::string("  \"") + part + "\": [\n";
        const bool re = part[0] == 'r';
        for (std::size_t i = 0; i < rho.rows(); ++i) {
            out += "    [";
            for (std::size_t j = 0; j < rho.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g",
                              re ? rho(i, j).real() : rho(i, j).imag());
                out += buf;
                if (j + 1 < rho.cols()) out += ", ";
            }
            out += (i + 1 < rho.rows()) ? "],\n" : "]\n";
        }
        out += re ? "  ],\n" : "  ]\n";
    }
    out += "}\n";
    return out;
}

}  // namespace qblfq
