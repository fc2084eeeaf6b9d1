#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qblfq/ansatz.hpp"
#include "qblfq/blfq.hpp"
#include "qblfq/optimize.hpp"
#include "qblfq/rng.hpp"
#include "qblfq/sim.hpp"
#include "test_util.hpp"

using namespace qblfq;

namespace {

ObjectiveHandle quadratic_bowl(int dim) {
    ObjectiveHandle obj;
    obj.dimension = dim;
    obj.evaluate = [](std::span<const double> p, std::uint64_t) {
        double acc = 0.0;
        for (double v : p) acc += (v - 1.0) * (v - 1.0);
        return acc;
    };
    return obj;
}

double true_bowl(std::span<const double> p) {
    double acc = 0.0;
    for (double v : p) acc += (v - 1.0) * (v - 1.0);
    return acc;
}

// exact expectation objective over a circuit, with parameter-shift gradient
ObjectiveHandle circuit_objective(const Circuit& c, const PauliOperator& op,
                                  std::uint64_t initial) {
    ObjectiveHandle obj;
    obj.dimension = c.n_parameters;
    obj.evaluate = [&c, &op, initial](std::span<const double> p, std::uint64_t) {
        return expectation_exact(apply_circuit(c, p, initial), op);
    };
    obj.gradient = [&c, &op, initial](std::span<const double> p) {
        GateShiftEval shifted = [&](std::span<const double> pp, int gi, double delta) {
            return expectation_exact(apply_circuit(c, pp, initial, {gi, delta}), op);
        };
        return parameter_shift_gradient(c, shifted, p);
    };
    return obj;
}

std::vector<double> finite_difference(const ObjectiveHandle& obj, std::span<const double> p) {
    std::vector<double> g(p.size());
    std::vector<double> work(p.begin(), p.end());
    const double eps = 1e-6;
    for (std::size_t i = 0; i < p.size(); ++i) {
        work[i] = p[i] + eps;
        const double fp = obj.evaluate(work, 0);
        work[i] = p[i] - eps;
        const double fm = obj.evaluate(work, 0);
        work[i] = p[i];
        g[i] = (fp - fm) / (2 * eps);
    }
    return g;
}

}  // namespace

TEST_CASE("simplex solves the quadratic bowl") {
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::SIMPLEX;
    cfg.max_iterations = 500;
    cfg.tolerance = 1e-12;
    cfg.restarts = 5;
    const auto trace = minimize(quadratic_bowl(8), cfg, 11);
    CHECK(trace.final_cost < 1e-6);
}

TEST_CASE("grad solves the quadratic bowl quickly") {
    ObjectiveHandle obj = quadratic_bowl(8);
    obj.gradient = [](std::span<const double> p) {
        std::vector<double> g(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) g[i] = 2.0 * (p[i] - 1.0);
        return g;
    };
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::GRAD;
    cfg.max_iterations = 200;
    cfg.tolerance = 1e-12;
    cfg.restarts = 2;
    const auto trace = minimize(obj, cfg, 3);
    CHECK(trace.final_cost < 1e-18);
}

TEST_CASE("SPSA tolerates additive Gaussian noise") {
    int successes = 0;
    for (int trial = 0; trial < 20; ++trial) {
        ObjectiveHandle obj;
        obj.dimension = 4;
        obj.evaluate = [](std::span<const double> p, std::uint64_t eval_seed) {
            Rng rng(eval_seed);
            const double u1 = rng.next_double(), u2 = rng.next_double();
            const double gauss =
                std::sqrt(-2.0 * std::log(std::max(u1, 1e-300))) * std::cos(2 * M_PI * u2);
            return true_bowl(p) + 0.1 * gauss;
        };
        obj.deterministic = false;
        OptimizerConfig cfg;
        cfg.kind = OptimizerKind::SPSA;
        cfg.max_iterations = 1000;
        cfg.restarts = 1;
        const auto trace = minimize(obj, cfg, 100u + static_cast<std::uint64_t>(trial));
        if (true_bowl(trace.final_params) < 0.05) ++successes;
    }
    CHECK(successes >= 18);  // >= 90% of 20 trials
}

TEST_CASE("parameter-shift gradient matches analytic and finite-difference values") {
    // <Z> after RY(theta)|0> = cos(theta); derivative -sin(theta)
    Circuit c;
    c.n_qubits = 1;
    c.n_parameters = 1;
    c.append(Gate::ry(0, 0));
    PauliOperator z(1);
    z.add_term(PauliString::from_string("Z"), 1.0);
    const auto obj = circuit_objective(c, z, 0);

    for (double theta : {0.0, M_PI / 2, 1.234}) {
        std::vector<double> p{theta};
        const auto g = obj.gradient(p);
        CHECK(g[0] == doctest::Approx(-std::sin(theta)).epsilon(1e-10));
    }

    std::vector<double> at{M_PI / 2};
    CHECK(obj.gradient(at)[0] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("parameter-shift agrees with finite differences on random HEA objectives") {
    Rng rng(31);
    const auto c = build_hea(2, 1);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix h = testutil::random_hermitian(4, 600u + static_cast<unsigned>(trial));
        const auto op = compact_encode(h, 0.0);
        const auto obj = circuit_objective(c, op, 0);
        std::vector<double> p(static_cast<std::size_t>(c.n_parameters));
        for (auto& v : p) v = rng.uniform(-3, 3);
        const auto g = obj.gradient(p);
        const auto fd = finite_difference(obj, p);
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(g[i] - fd[i]) < 1e-5);
    }
}

TEST_CASE("parameter-shift handles shared parameters in the UCC circuit") {
    Rng rng(32);
    const auto c = build_ucc_single(4, 0, 2);  // each theta feeds four RZ gates
    const auto src = builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    const auto op = jw_encode_one_body(src.matrix);
    const auto obj = circuit_objective(c, op, 1);
    std::vector<double> p(3);
    for (auto& v : p) v = rng.uniform(-2, 2);
    const auto g = obj.gradient(p);
    const auto fd = finite_difference(obj, p);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(std::abs(g[i] - fd[i]) < 1e-4 * std::max(1.0, std::abs(fd[i])));
}

TEST_CASE("constant objective has zero gradient") {
    Circuit c;
    c.n_qubits = 1;
    c.n_parameters = 1;
    c.append(Gate::ry(0, 0));
    PauliOperator ident(1);
    ident.add_term(PauliString::from_string("I"), 2.5);
    const auto obj = circuit_objective(c, ident, 0);
    std::vector<double> p{0.4};
    for (double g : obj.gradient(p)) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("identical config and seed give bitwise identical traces") {
    ObjectiveHandle obj;
    obj.dimension = 3;
    obj.evaluate = [](std::span<const double> p, std::uint64_t eval_seed) {
        Rng rng(eval_seed);
        return true_bowl(p) + 0.01 * rng.next_double();
    };
    obj.deterministic = false;
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::SPSA;
    cfg.max_iterations = 50;
    cfg.restarts = 3;

    const auto t1 = minimize(obj, cfg, 2718);
    const auto t2 = minimize(obj, cfg, 2718);
    REQUIRE(t1.records.size() == t2.records.size());
    for (std::size_t i = 0; i < t1.records.size(); ++i) {
        CHECK(t1.records[i].cost == t2.records[i].cost);
        CHECK(t1.records[i].params_hash == t2.records[i].params_hash);
    }
    CHECK(t1.final_params == t2.final_params);
    CHECK(t1.final_cost == t2.final_cost);
}

TEST_CASE("non-finite costs abort the restart but not the run") {
    ObjectiveHandle obj;
    obj.dimension = 2;
    int calls = 0;
    obj.evaluate = [&calls](std::span<const double> p, std::uint64_t) {
        ++calls;
        if (p[0] > 2.0) return std::numeric_limits<double>::quiet_NaN();
        return true_bowl(p);
    };
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::SIMPLEX;
    cfg.max_iterations = 300;
    cfg.restarts = 6;
    const auto trace = minimize(obj, cfg, 5);
    CHECK(std::isfinite(trace.final_cost));
    CHECK(trace.final_cost < 1e-3);
}

TEST_CASE("trace CSV format") {
    OptTrace t;
    t.records = {{0, 1, 2.5, 0.1}, {1, 2, 1.5, 0.2}};
    const auto csv = t.to_csv();
    CHECK(csv.find("iteration,cost,std_error\n") == 0);
    CHECK(csv.find("0,2.5,0.1") != std::string::npos);
}
