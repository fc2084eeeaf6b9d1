#include "qblfq/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qblfq {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on the Legendre polynomial.
template <int N>
struct GaussRule {
    std::array<double, N> x{};
    std::array<double, N> w{};
    GaussRule() {
        for (int i = 0; i < N; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = N * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = N * (t * p1 - p0) / (t * t - 1.0);
            x[static_cast<std::size_t>(i)] = t;
            w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

template <int N>
double gauss(const std::function<double(double)>& f, double a, double b) {
    static const GaussRule<N> rule;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < N; ++i)
        acc += rule.w[static_cast<std::size_t>(i)] * f(mid + half * rule.x[static_cast<std::size_t>(i)]);
    return acc * half;
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol, int depth) {
    const double coarse = gauss<7>(f, a, b);
    const double fine = gauss<15>(f, a, b);
    if (std::abs(fine - coarse) <= tol || depth >= 48) return fine;
    const double mid = 0.5 * (a + b);
    return adaptive(f, a, mid, tol * 0.5, depth + 1) +
           adaptive(f, mid, b, tol * 0.5, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (!(b > a)) throw std::invalid_argument("integrate: need b > a");
    return adaptive(f, a, b, abs_tol, 0);
}

double integrate_unit_endpoint(const std::function<double(double)>& f, double abs_tol) {
    // x = sin^2 u, dx = 2 sin u cos u du, u in (0, pi/2)
    auto g = [&](double u) {
        const double s = std::sin(u), c = std::cos(u);
        return f(s * s) * 2.0 * s * c;
    };
    return adaptive(g, 0.0, M_PI / 2.0, abs_tol, 0);
}

}  // namespace qblfq
