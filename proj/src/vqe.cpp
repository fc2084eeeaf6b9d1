#include "qblfq/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

#include "qblfq/blfq.hpp"
#include "qblfq/rng.hpp"

namespace qblfq {

namespace {

struct EvalRecord {
    std::vector<double> energies;
    std::vector<double> errors;
};

std::uint64_t hash_vec(std::span<const double> params) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (double p : params) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof p);
        std::memcpy(&bits, &p, sizeof bits);
        h ^= bits;
        std::uint64_t s = h;
        h = splitmix64(s);
    }
    return h;
}

std::string bitstring_of(std::uint64_t index, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
        if (index & (1ULL << q)) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
    return s;
}

}  // namespace

SsvqeSpec SsvqeSpec::lowest(int count) {
    SsvqeSpec spec;
    double w = 1.0;
    for (int i = 0; i < count; ++i) {
        spec.references.push_back(static_cast<std::uint64_t>(i));
        spec.weights.push_back(w);
        w *= 0.5;
    }
    return spec;
}

std::string StateResult::trace_csv() const {
    std::string out = "iteration,E_i,std_error\n";
    char buf[96];
    for (const auto& p : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", p.iteration, p.energy, p.std_error);
        out += buf;
    }
    return out;
}

SpectrumResult run_ssvqe(const PauliOperator& hamiltonian, const AnsatzSpec& ansatz,
                         const SsvqeSpec& spec, const RunSettings& settings,
                         const OptimizerConfig& optimizer, std::uint64_t seed) {
    const int n = hamiltonian.n_qubits();
    if (ansatz.n_qubits != n)
        throw std::invalid_argument("run_ssvqe: ansatz/Hamiltonian qubit count mismatch");
    if (!hamiltonian.is_hermitian())
        throw std::invalid_argument("run_ssvqe: Hamiltonian must be Hermitian");
    if (spec.references.empty()) throw std::invalid_argument("run_ssvqe: no reference states");
    if (spec.references.size() != spec.weights.size())
        throw std::invalid_argument("run_ssvqe: weights/references length mismatch");
    {
        std::set<std::uint64_t> uniq(spec.references.begin(), spec.references.end());
        if (uniq.size() != spec.references.size())
            throw std::invalid_argument("run_ssvqe: duplicate reference states");
        for (auto r : spec.references)
            if (r >= (1ULL << n)) throw std::out_of_range("run_ssvqe: reference index out of range");
    }
    std::vector<double> weights = spec.weights;
    if (spec.kth_state_mode) {
        for (auto& w : weights) w = 1.0;
        weights.back() = spec.kth_weight;
        if (!(spec.kth_weight > 0.0 && spec.kth_weight < 1.0))
            throw std::invalid_argument("run_ssvqe: k-th state weight must be in (0,1)");
    } else {
        for (std::size_t i = 0; i + 1 < weights.size(); ++i)
            if (!(weights[i] > weights[i + 1]))
                throw std::invalid_argument("run_ssvqe: weights must be strictly decreasing");
        if (weights.back() <= 0.0)
            throw std::invalid_argument("run_ssvqe: weights must be positive");
    }

    const Circuit circuit = build_ansatz(ansatz);
    const std::size_t n_refs = spec.references.size();
    const bool sampled = settings.tier != Tier::SV;

    std::optional<MitigationFilter> filter;
    NoiseSpec noise = settings.noise;
    const NoiseSpec* noise_ptr = nullptr;
    if (settings.tier == Tier::NOISY) {
        noise_ptr = &noise;
        if (settings.mitigation)
            filter = build_calibration_filter(n, noise, settings.calibration_shots,
                                              derive_seed({seed, 0x6d697469ULL}));
    }

    // SV expectations go through the dense matrix; sampling through the
    // grouped estimator.
    std::shared_ptr<Matrix> dense;
    if (!sampled) dense = std::make_shared<Matrix>(reconstruct_matrix(hamiltonian));

    auto sv_energy = [dense, &circuit, &spec](std::span<const double> params, std::size_t ref,
                                              const GateShift& shift = {}) {
        const QuantumState psi = apply_circuit(circuit, params, spec.references[ref], shift);
        const auto hpsi = dense->apply(psi);
        cxd acc = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) acc += std::conj(psi[i]) * hpsi[i];
        return acc.real();
    };

    auto records = std::make_shared<std::map<std::uint64_t, EvalRecord>>();
    auto last_cost_error = std::make_shared<double>(0.0);

    ObjectiveHandle obj;
    obj.dimension = circuit.n_parameters;
    obj.deterministic = !sampled;
    obj.cost_scale = std::max(1.0, hamiltonian.max_abs_coefficient());
    obj.evaluate = [&, records, last_cost_error](std::span<const double> params,
                                                 std::uint64_t eval_seed) {
        EvalRecord rec;
        rec.energies.resize(n_refs);
        rec.errors.assign(n_refs, 0.0);
        double cost = 0.0, cost_var = 0.0;
        for (std::size_t i = 0; i < n_refs; ++i) {
            double e, err = 0.0;
            if (sampled) {
                const auto se = expectation_sampled(
                    circuit, params, spec.references[i], hamiltonian, settings.shots,
                    derive_seed({eval_seed, 0x726566ULL, i}), noise_ptr,
                    filter ? &*filter : nullptr);
                e = se.mean;
                err = se.std_error;
            } else {
                e = sv_energy(params, i);
            }
            rec.energies[i] = e;
            rec.errors[i] = err;
            cost += weights[i] * e;
            cost_var += weights[i] * weights[i] * err * err;
        }
        (*records)[hash_vec(params)] = std::move(rec);
        *last_cost_error = std::sqrt(cost_var);
        return cost;
    };
    if (sampled)
        obj.std_error = [last_cost_error](std::span<const double>, std::uint64_t) {
            return *last_cost_error;
        };
    if (!sampled) {
        obj.gradient = [&](std::span<const double> params) {
            GateShiftEval eval_shifted = [&](std::span<const double> p, int gate_index,
                                             double delta) {
                double cost = 0.0;
                for (std::size_t i = 0; i < n_refs; ++i)
                    cost += weights[i] * sv_energy(p, i, {gate_index, delta});
                return cost;
            };
            return parameter_shift_gradient(circuit, eval_shifted, params);
        };
    }

    OptTrace trace = minimize(obj, optimizer, seed);

    SpectrumResult result;
    result.optimizer_trace = std::move(trace);
    result.circuit = circuit;
    result.final_params = result.optimizer_trace.final_params;
    result.tier = settings.tier;
    result.seed = seed;

    // join per-iteration optimizer records with per-evaluation state energies
    std::vector<std::vector<StatePoint>> state_traces(n_refs);
    for (const auto& r : result.optimizer_trace.records) {
        auto it = records->find(r.params_hash);
        if (it == records->end()) continue;
        for (std::size_t i = 0; i < n_refs; ++i)
            state_traces[i].push_back({r.iteration, it->second.energies[i], it->second.errors[i]});
    }

    for (std::size_t i = 0; i < n_refs; ++i) {
        StateResult sr;
        sr.reference = spec.references[i];
        sr.reference_bitstring = bitstring_of(spec.references[i], n);
        sr.trace = std::move(state_traces[i]);

        if (sampled) {
            // smooth the SPSA tail: mean of the last (up to) 10 recorded iterations
            const std::size_t take = std::min<std::size_t>(10, sr.trace.size());
            if (take == 0) throw std::logic_error("run_ssvqe: empty trace");
            double esum = 0.0, vsum = 0.0;
            for (std::size_t k = sr.trace.size() - take; k < sr.trace.size(); ++k) {
                esum += sr.trace[k].energy;
                vsum += sr.trace[k].std_error * sr.trace[k].std_error;
            }
            sr.energy_mev2 = esum / static_cast<double>(take);
            sr.std_error = std::sqrt(vsum / static_cast<double>(take));
        } else {
            sr.energy_mev2 = sv_energy(result.final_params, i);
            sr.std_error = 0.0;
        }
        sr.mass_mev = std::sqrt(std::max(0.0, sr.energy_mev2));
        // final states always come from the noiseless simulator at theta*
        sr.final_state = apply_circuit(circuit, result.final_params, spec.references[i]);
        result.states.push_back(std::move(sr));
    }
    return result;
}

SpectrumResult run_vqe(const PauliOperator& hamiltonian, const AnsatzSpec& ansatz,
                       std::uint64_t initial, const RunSettings& settings,
                       const OptimizerConfig& optimizer, std::uint64_t seed) {
    SsvqeSpec spec;
    spec.references = {initial};
    spec.weights = {1.0};
    return run_ssvqe(hamiltonian, ansatz, spec, settings, optimizer, seed);
}

const QuantumState& final_state(const SpectrumResult& result, int index) {
    if (index < 0 || index >= static_cast<int>(result.states.size()))
        throw std::out_of_range("final_state: bad index");
    return result.states[static_cast<std::size_t>(index)].final_state;
}

}  // namespace qblfq
