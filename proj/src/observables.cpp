#include "qblfq/observables.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "qblfq/quadrature.hpp"
#include "qblfq/rng.hpp"

namespace qblfq {

namespace {

constexpr double kNc = 3.0;

bool is_up_down(const BlfqState& s) { return s.twos == 1 && s.twosbar == -1; }
bool is_down_up(const BlfqState& s) { return s.twos == -1 && s.twosbar == 1; }

// J_l = int_0^1 sqrt(x(1-x)) chi_l(x) dx; C_l = J_l / (2 sqrt(pi)).
// The normalization is fixed against the reference decay constants (deriving
// from the normalized singlet/triplet spin combination in the current matrix
// element).
double decay_c_l(int l, const ModelParams& params) {
    const double j = integrate_unit_endpoint(
        [&](double x) { return std::sqrt(x * (1.0 - x)) * chi_l(x, l, params); }, 1e-10);
    return j / (2.0 * std::sqrt(M_PI));
}

// f evaluated directly from basis coefficients via the current integral
double decay_from_coefficients(const std::vector<cxd>& coeff, DecayChannel channel,
                               const BasisCatalog& catalog, const ModelParams& params) {
    std::map<int, double> c_l_cache;
    double acc = 0.0;
    for (int i = 0; i < catalog.size(); ++i) {
        const auto& st = catalog.states[static_cast<std::size_t>(i)];
        if (st.m != 0) continue;
        if (!is_up_down(st) && !is_down_up(st)) continue;
        auto [it, fresh] = c_l_cache.try_emplace(st.l, 0.0);
        if (fresh) it->second = decay_c_l(st.l, params);
        const double sign = ((st.n % 2) ? -1.0 : 1.0) *
                            (is_up_down(st) ? 1.0
                                            : (channel == DecayChannel::pseudoscalar ? -1.0 : 1.0));
        acc += sign * it->second * coeff[static_cast<std::size_t>(i)].real();
    }
    return params.kappa_mev * std::sqrt(kNc) / M_PI * acc;
}

}  // namespace

DecayVector decay_vector(DecayChannel channel, const BasisCatalog& catalog) {
    DecayVector nu;
    nu.channel = channel;
    nu.components.assign(static_cast<std::size_t>(catalog.size()), 0.0);
    for (int i = 0; i < catalog.size(); ++i) {
        const auto& st = catalog.states[static_cast<std::size_t>(i)];
        if (st.m != 0 || st.l % 2 != 0) continue;
        const double sign = (st.n % 2) ? -1.0 : 1.0;
        if (is_up_down(st))
            nu.components[static_cast<std::size_t>(i)] = sign;
        else if (is_down_up(st))
            nu.components[static_cast<std::size_t>(i)] =
                (channel == DecayChannel::pseudoscalar) ? -sign : sign;
    }
    return nu;
}

PauliOperator decay_projector(DecayChannel channel, const BasisCatalog& catalog) {
    const auto nu = decay_vector(channel, catalog);
    const int dim_states = catalog.size();
    std::size_t dim = 1;
    while (dim < static_cast<std::size_t>(dim_states)) dim <<= 1;
    if (dim != static_cast<std::size_t>(dim_states))
        throw std::invalid_argument("decay_projector: catalog size must be a power of two");
    Matrix outer(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) outer(i, j) = nu.components[i] * nu.components[j];
    return compact_encode(outer);
}

DecayCalibration calibrate_decay_prefactor(const HamiltonianSource& source) {
    using Key = std::tuple<int, int, int, double, double>;
    static std::map<Key, DecayCalibration> cache;
    static std::mutex mutex;
    const Key key{static_cast<int>(source.label), source.catalog.nmax, source.catalog.lmax,
                  source.params.kappa_mev, source.params.mq_mev};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end() && source.label != HamiltonianLabel::external) return it->second;
    }

    const auto eig = exact_eigensolve(source);
    std::vector<cxd> ground(source.matrix.rows());
    for (std::size_t i = 0; i < ground.size(); ++i) ground[i] = eig.vectors(i, 0);

    const double f_quad =
        decay_from_coefficients(ground, DecayChannel::pseudoscalar, source.catalog, source.params);
    const auto nu = decay_vector(DecayChannel::pseudoscalar, source.catalog);
    double overlap = 0.0;
    for (std::size_t i = 0; i < ground.size(); ++i)
        overlap += nu.components[i] * ground[i].real();
    if (std::abs(overlap) < 1e-12)
        throw std::runtime_error("calibrate_decay_prefactor: vanishing projector overlap");

    DecayCalibration cal{std::abs(f_quad) / std::abs(overlap)};
    if (source.label != HamiltonianLabel::external) {
        std::lock_guard<std::mutex> lock(mutex);
        cache[key] = cal;
    }
    return cal;
}

std::string DecayResult::to_json() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"channel\": \"%s\", \"f_MeV\": %.17g, \"std_error\": %.17g, "
                  "\"K_MeV\": %.17g, \"tier\": \"%s\"%s}",
                  channel == DecayChannel::pseudoscalar ? "pseudoscalar" : "vector", f_mev,
                  std_error, k_mev,
                  tier == Tier::SV ? "sv" : (tier == Tier::SHOTS ? "shots" : "noisy"),
                  clamped ? ", \"clamped\": true" : "");
    return buf;
}

DecayResult measure_decay_constant(const QuantumState& state, DecayChannel channel,
                                   const HamiltonianSource& source, Tier tier,
                                   std::uint64_t shots, std::uint64_t seed,
                                   const NoiseSpec* noise, const MitigationFilter* filter) {
    const auto projector = decay_projector(channel, source.catalog);
    if (state.size() != (1ULL << projector.n_qubits()))
        throw std::invalid_argument("measure_decay_constant: state dimension mismatch");
    const auto cal = calibrate_decay_prefactor(source);

    DecayResult out;
    out.channel = channel;
    out.k_mev = cal.k_mev;
    out.tier = tier;

    if (tier == Tier::SV) {
        const double expect = expectation_exact(state, projector);
        out.f_mev = cal.k_mev * std::sqrt(std::max(0.0, expect));
        return out;
    }
    const auto se = expectation_sampled_state(state, projector, shots, seed,
                                              tier == Tier::NOISY ? noise : nullptr, filter);
    double expect = se.mean;
    if (expect < 0.0) {
        if (expect < -4.0 * se.std_error) out.clamped = true;
        expect = 0.0;
    }
    out.f_mev = cal.k_mev * std::sqrt(expect);
    // first-order error propagation through the square root
    out.std_error = (expect > 0.0)
                        ? cal.k_mev * 0.5 * se.std_error / std::sqrt(expect)
                        : cal.k_mev * std::sqrt(se.std_error);
    return out;
}

PauliOperator pdf_operator(double x, const BasisCatalog& catalog, const ModelParams& params) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("pdf_operator: x must lie in (0,1)");
    const int dim_states = catalog.size();
    std::size_t dim = 1;
    while (dim < static_cast<std::size_t>(dim_states)) dim <<= 1;
    if (dim != static_cast<std::size_t>(dim_states))
        throw std::invalid_argument("pdf_operator: catalog size must be a power of two");

    // group catalog states sharing (n, m, s, sbar); sum chi_l chi_lbar / 4pi
    // over all (l, lbar) pairs within each group
    std::map<std::tuple<int, int, int, int>, std::vector<int>> combos;
    for (int i = 0; i < dim_states; ++i) {
        const auto& st = catalog.states[static_cast<std::size_t>(i)];
        combos[{st.n, st.m, st.twos, st.twosbar}].push_back(i);
    }
    std::map<int, double> chi_cache;
    auto chi_of = [&](int l) {
        auto [it, fresh] = chi_cache.try_emplace(l, 0.0);
        if (fresh) it->second = chi_l(x, l, params);
        return it->second;
    };

    Matrix m(dim, dim);
    for (const auto& [key, members] : combos)
        for (int i : members)
            for (int j : members) {
                const int l = catalog.states[static_cast<std::size_t>(i)].l;
                const int lbar = catalog.states[static_cast<std::size_t>(j)].l;
                m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) +=
                    chi_of(l) * chi_of(lbar) / (4.0 * M_PI);
            }
    return compact_encode(m);
}

double classical_pdf(const std::vector<cxd>& coefficients, const BasisCatalog& catalog,
                     const ModelParams& params, double x) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("classical_pdf: x must lie in (0,1)");
    if (coefficients.size() < static_cast<std::size_t>(catalog.size()))
        throw std::invalid_argument("classical_pdf: coefficient vector too short");
    std::map<std::tuple<int, int, int, int>, cxd> amplitudes;
    std::map<int, double> chi_cache;
    for (int i = 0; i < catalog.size(); ++i) {
        const auto& st = catalog.states[static_cast<std::size_t>(i)];
        auto [it, fresh] = chi_cache.try_emplace(st.l, 0.0);
        if (fresh) it->second = chi_l(x, st.l, params);
        amplitudes[{st.n, st.m, st.twos, st.twosbar}] +=
            coefficients[static_cast<std::size_t>(i)] * it->second;
    }
    double q = 0.0;
    for (const auto& [key, amp] : amplitudes) q += std::norm(amp);
    return q / (4.0 * M_PI);
}

std::vector<double> default_pdf_grid(int points) {
    std::vector<double> xs(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        xs[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / (points + 1);
    return xs;
}

std::vector<PdfPoint> pdf_scan(const QuantumState& state, const BasisCatalog& catalog,
                               const ModelParams& params, const std::vector<double>& x_grid,
                               Tier tier, std::uint64_t shots, std::uint64_t seed,
                               const NoiseSpec* noise, const MitigationFilter* filter) {
    std::vector<PdfPoint> out;
    out.reserve(x_grid.size());
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
        const double x = x_grid[k];
        const auto op = pdf_operator(x, catalog, params);
        PdfPoint p;
        p.x = x;
        if (tier == Tier::SV) {
            p.q = expectation_exact(state, op);
        } else {
            const auto se = expectation_sampled_state(state, op, shots,
                                                      derive_seed({seed, 0x706466ULL, k}),
                                                      tier == Tier::NOISY ? noise : nullptr,
                                                      filter);
            p.q = se.mean;
            p.std_error = se.std_error;
        }
        out.push_back(p);
    }
    return out;
}

std::string pdf_to_csv(const std::vector<PdfPoint>& points) {
    std::string out = "x,q,std_error\n";
    char buf[96];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x, p.q, p.std_error);
        out += buf;
    }
    return out;
}

}  // namespace qblfq
