#include "qblfq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "qblfq/rng.hpp"

namespace qblfq {

namespace {

std::uint64_t hash_params(std::span<const double> params) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (double p : params) {
        std::uint64_t bits;
        std::memcpy(&bits, &p, sizeof bits);
        h ^= bits;
        std::uint64_t s = h;
        h = splitmix64(s);
    }
    return h;
}

struct ScaledObjective {
    const ObjectiveHandle& obj;
    double scale;
    mutable std::uint64_t eval_counter = 0;
    std::uint64_t stream;

    double operator()(std::span<const double> p) const {
        const std::uint64_t eval_seed = derive_seed({stream, eval_counter++});
        const double v = obj.evaluate(p, eval_seed) / scale;
        if (!std::isfinite(v)) throw std::runtime_error("non-finite cost");
        return v;
    }
};

OptTrace run_spsa(const ObjectiveHandle& obj, const OptimizerConfig& cfg,
                  std::vector<double> theta, std::uint64_t seed) {
    const int dim = obj.dimension;
    const double scale = obj.cost_scale > 0 ? obj.cost_scale : 1.0;
    ScaledObjective f{obj, scale, 0, derive_seed({seed, 0x73707361ULL})};
    Rng rng(derive_seed({seed, 0x70657274ULL}));

    const double alpha = cfg.spsa.alpha, gamma = cfg.spsa.gamma;
    const double big_a = cfg.spsa.big_a >= 0 ? cfg.spsa.big_a : 0.1 * cfg.max_iterations;
    const double c0 = cfg.spsa.c;

    // calibrate a: aim the first update at ~0.1 rad per component
    double a = cfg.spsa.a;
    std::vector<double> delta(dim), plus(dim), minus(dim);
    if (a <= 0.0) {
        double avg_mag = 0.0;
        const int probes = 10;
        for (int t = 0; t < probes; ++t) {
            for (int i = 0; i < dim; ++i) delta[i] = rng.next_sign();
            for (int i = 0; i < dim; ++i) {
                plus[i] = theta[i] + c0 * delta[i];
                minus[i] = theta[i] - c0 * delta[i];
            }
            const double diff = f(plus) - f(minus);
            avg_mag += std::abs(diff) / (2.0 * c0);
        }
        avg_mag /= probes;
        a = (avg_mag > 1e-12) ? 0.1 * std::pow(big_a + 1.0, alpha) / avg_mag : 0.1;
    }

    OptTrace trace;
    double cost = f(theta);
    for (int k = 0; k < cfg.max_iterations; ++k) {
        const double ak = a / std::pow(k + 1.0 + big_a, alpha);
        const double ck = c0 / std::pow(k + 1.0, gamma);
        for (int i = 0; i < dim; ++i) delta[i] = rng.next_sign();
        for (int i = 0; i < dim; ++i) {
            plus[i] = theta[i] + ck * delta[i];
            minus[i] = theta[i] - ck * delta[i];
        }
        const double fp = f(plus), fm = f(minus);
        const double g0 = (fp - fm) / (2.0 * ck);
        for (int i = 0; i < dim; ++i) theta[i] -= ak * g0 / delta[i];
        cost = f(theta);
        const double err = obj.std_error ? obj.std_error(theta, 0) : 0.0;
        trace.records.push_back({k, hash_params(theta), cost * scale, err});
    }
    trace.final_params = theta;
    trace.final_cost = cost * scale;
    trace.termination = "max_iterations";
    return trace;
}

OptTrace run_simplex(const ObjectiveHandle& obj, const OptimizerConfig& cfg,
                     std::vector<double> start, std::uint64_t seed) {
    const int dim = obj.dimension;
    const double scale = obj.cost_scale > 0 ? obj.cost_scale : 1.0;
    ScaledObjective f{obj, scale, 0, derive_seed({seed, 0x73696d70ULL})};

    // standard Nelder-Mead coefficients
    const double refl = 1.0, expa = 2.0, contr = 0.5, shrink = 0.5;
    const double step = 0.25;

    std::vector<std::vector<double>> x(static_cast<std::size_t>(dim) + 1, start);
    for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i) + 1][i] += step;
    std::vector<double> fx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fx[i] = f(x[i]);

    OptTrace trace;
    std::vector<std::size_t> order(x.size());
    int iter = 0;
    std::string termination = "max_iterations";
    for (; iter < cfg.max_iterations; ++iter) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a2, std::size_t b2) { return fx[a2] < fx[b2]; });
        const std::size_t best = order.front(), worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];
        trace.records.push_back({iter, hash_params(x[best]), fx[best] * scale, 0.0});

        if (std::abs(fx[worst] - fx[best]) <= cfg.tolerance / scale) {
            termination = "simplex_spread_below_tolerance";
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i == worst) continue;
            for (int d = 0; d < dim; ++d) centroid[d] += x[i][d];
        }
        for (int d = 0; d < dim; ++d) centroid[d] /= dim;

        auto blend = [&](double t) {
            std::vector<double> p(dim);
            for (int d = 0; d < dim; ++d) p[d] = centroid[d] + t * (centroid[d] - x[worst][d]);
            return p;
        };

        auto xr = blend(refl);
        const double fr = f(xr);
        if (fr < fx[best]) {
            auto xe = blend(expa);
            const double fe = f(xe);
            if (fe < fr) {
                x[worst] = xe;
                fx[worst] = fe;
            } else {
                x[worst] = xr;
                fx[worst] = fr;
            }
        } else if (fr < fx[second_worst]) {
            x[worst] = xr;
            fx[worst] = fr;
        } else {
            auto xc = blend((fr < fx[worst]) ? contr : -contr);
            const double fc = f(xc);
            if (fc < std::min(fr, fx[worst])) {
                x[worst] = xc;
                fx[worst] = fc;
            } else {
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (i == best) continue;
                    for (int d = 0; d < dim; ++d)
                        x[i][d] = x[best][d] + shrink * (x[i][d] - x[best][d]);
                    fx[i] = f(x[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (fx[i] < fx[best]) best = i;
    OptTrace out = std::move(trace);
    out.final_params = x[best];
    out.final_cost = fx[best] * scale;
    out.termination = termination;
    return out;
}

// Parameter-shift gradient descent with limited-memory curvature (two-loop
// L-BFGS direction) and Armijo backtracking.
OptTrace run_grad(const ObjectiveHandle& obj, const OptimizerConfig& cfg,
                  std::vector<double> theta, std::uint64_t seed) {
    if (!obj.gradient)
        throw std::invalid_argument("GRAD optimizer requires an exact gradient");
    const int dim = obj.dimension;
    const double scale = obj.cost_scale > 0 ? obj.cost_scale : 1.0;
    ScaledObjective f{obj, scale, 0, derive_seed({seed, 0x67726164ULL})};

    auto grad = [&](std::span<const double> p) {
        auto g = obj.gradient(p);
        for (auto& v : g) v /= scale;
        return g;
    };
    auto dot = [dim](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (int i = 0; i < dim; ++i) acc += a[i] * b[i];
        return acc;
    };

    const std::size_t memory = 10;
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    auto direction = [&](const std::vector<double>& g) {
        std::vector<double> q = g;
        const std::size_t k = s_hist.size();
        std::vector<double> alpha(k);
        for (std::size_t i = k; i-- > 0;) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], q);
            for (int d = 0; d < dim; ++d) q[d] -= alpha[i] * y_hist[i][d];
        }
        double gamma = 0.1;
        if (k > 0) gamma = dot(s_hist[k - 1], y_hist[k - 1]) / dot(y_hist[k - 1], y_hist[k - 1]);
        for (auto& v : q) v *= gamma;
        for (std::size_t i = 0; i < k; ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], q);
            for (int d = 0; d < dim; ++d) q[d] += s_hist[i][d] * (alpha[i] - beta);
        }
        for (auto& v : q) v = -v;
        return q;
    };

    OptTrace trace;
    double cost = f(theta);
    auto g = grad(theta);
    std::string termination = "max_iterations";
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        const double gnorm2 = dot(g, g);
        trace.records.push_back({iter, hash_params(theta), cost * scale, 0.0});
        if (std::sqrt(gnorm2) <= cfg.tolerance / scale) {
            termination = "gradient_below_tolerance";
            break;
        }

        auto d = direction(g);
        double slope = dot(g, d);
        if (!(slope < 0.0)) {  // not a descent direction; restart the memory
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (int i = 0; i < dim; ++i) d[i] = -0.1 * g[i];
            slope = -0.1 * gnorm2;
        }

        std::vector<double> trial(dim);
        double trial_cost = std::numeric_limits<double>::infinity();
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 50; ++bt) {
            for (int i = 0; i < dim; ++i) trial[i] = theta[i] + t * d[i];
            trial_cost = f(trial);
            if (trial_cost <= cost + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            termination = "line_search_stalled";
            break;
        }

        auto g_new = grad(trial);
        std::vector<double> s(dim), y(dim);
        for (int i = 0; i < dim; ++i) {
            s[i] = trial[i] - theta[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > memory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }
        theta = std::move(trial);
        cost = trial_cost;
        g = std::move(g_new);
    }
    trace.final_params = theta;
    trace.final_cost = cost * scale;
    trace.termination = termination;
    return trace;
}

}  // namespace

std::string OptTrace::to_csv() const {
    std::string out = "iteration,cost,std_error\n";
    char buf[96];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.iteration, r.cost, r.std_error);
        out += buf;
    }
    return out;
}

OptTrace minimize(const ObjectiveHandle& obj, const OptimizerConfig& cfg, std::uint64_t seed) {
    if (obj.dimension < 1) throw std::invalid_argument("minimize: dimension must be >= 1");
    if (cfg.max_iterations < 1) throw std::invalid_argument("minimize: max_iterations must be >= 1");

    OptTrace best;
    bool have = false;
    const int restarts = std::max(1, cfg.restarts);
    for (int r = 0; r < restarts; ++r) {
        const std::uint64_t rseed = derive_seed({seed, 0x72737472ULL, static_cast<std::uint64_t>(r)});
        Rng init_rng(derive_seed({rseed, 0x696e6974ULL}));
        std::vector<double> theta(static_cast<std::size_t>(obj.dimension));
        for (auto& v : theta) v = init_rng.uniform(cfg.init_lo, cfg.init_hi);

        OptTrace trace;
        try {
            switch (cfg.kind) {
                case OptimizerKind::SPSA: trace = run_spsa(obj, cfg, std::move(theta), rseed); break;
                case OptimizerKind::SIMPLEX: trace = run_simplex(obj, cfg, std::move(theta), rseed); break;
                case OptimizerKind::GRAD: trace = run_grad(obj, cfg, std::move(theta), rseed); break;
            }
        } catch (const std::runtime_error& e) {
            trace.termination = std::string("aborted: ") + e.what();
            trace.final_cost = std::numeric_limits<double>::infinity();
        }
        trace.restart_index = r;
        if (!have || trace.final_cost < best.final_cost) {
            best = std::move(trace);
            have = true;
        }
    }
    return best;
}

std::vector<double> parameter_shift_gradient(const Circuit& circuit,
                                             const GateShiftEval& eval_shifted,
                                             std::span<const double> params) {
    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
        const Gate& g = circuit.gates[gi];
        if (!g.is_rotation() || g.param_index < 0) continue;
        const double ep = eval_shifted(params, static_cast<int>(gi), M_PI / 2.0);
        const double em = eval_shifted(params, static_cast<int>(gi), -M_PI / 2.0);
        grad[static_cast<std::size_t>(g.param_index)] += g.coeff * 0.5 * (ep - em);
    }
    return grad;
}

}  // namespace qblfq
