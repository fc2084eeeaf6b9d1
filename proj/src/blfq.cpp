#include "qblfq/blfq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qblfq {

namespace {

// Eq. 21 matrix, MeV^2, integer entries as printed.
constexpr double kH11[4][4] = {
    {568487, 0, 25428, 0},
    {0, 1700976, 0, -15767},
    {25428, 0, 568487, 0},
    {0, -15767, 0, 1700976},
};

// Compact (4,1) operator, 56 terms. The published term list carries four
// transcription defects; the repaired values below reproduce the reference
// spectrum {369016, 575707, 737759, 976608} within +-2 MeV^2 and the decay
// constants 199.36 / 227.63 MeV. Strings: highest qubit first.
struct RawTerm {
    const char* s;
    double c;
};
constexpr RawTerm kH41Terms[] = {
    {"IIII", 1980715}, {"IIIZ", -526128}, {"IIXI", 495549}, {"IIXZ", 49226},
    {"IIZI", -545122}, {"IIZZ", 11747},
    {"IYIY", 30028},   {"IYXY", -22551},  {"IYYI", 28639},  {"IYYX", 20978},
    {"IYYZ", -66},     {"IYZY", 5575},
    {"XXII", 2002},    {"XXIZ", 7851},    {"XXXI", -374},   {"XXXZ", -5044},
    {"XXZI", 698},     {"XXZZ", 3286},
    {"XZII", 74640},   {"XZIX", -56314},  {"XZIZ", 7971},   {"XZXI", -35556},
    {"XZXX", 29701},   {"XZXZ", -6380},   {"XZYY", 899},    {"XZZI", 18521},
    {"XZZX", -14096},  {"XZZZ", 2675},
    {"YIIY", 30028},   {"YIXY", -22551},  {"YIYI", -28639}, {"YIYX", 20978},
    {"YIYZ", 66},      {"YIZY", 5575},
    {"YYII", 2002},    {"YYIZ", 7851},    {"YYXI", -374},   {"YYXZ", -5044},
    {"YYZI", 698},     {"YYZZ", 3286},
    {"ZXII", -74640},  {"ZXIX", -56314},  {"ZXIZ", -7971},  {"ZXXI", 35556},
    {"ZXXX", 29701},   {"ZXXZ", 6380},    {"ZXYY", 899},    {"ZXZI", -18521},
    {"ZXZX", -14096},  {"ZXZZ", -2675},
    {"ZZII", 237267},  {"ZZIZ", -29297},  {"ZZXI", 58469},  {"ZZXZ", 17304},
    {"ZZZI", -6135},   {"ZZZZ", -8354},
};

ModelParams params_1_1() { return {560.0, 300.0, 3, 0.89}; }
ModelParams params_4_1() { return {560.0, 380.0, 3, 0.89}; }

double lgamma_s(double x) { return std::lgamma(x); }

// Jacobi polynomial P_k^{(a,b)}(z) by the standard three-term recurrence.
double jacobi_poly(int k, double a, double b, double z) {
    if (k == 0) return 1.0;
    double pkm1 = 1.0;
    double pk = 0.5 * (a - b + (a + b + 2.0) * z);
    for (int j = 2; j <= k; ++j) {
        const double n = j;
        const double c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0);
        const double c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b);
        const double c3 = (2.0 * n + a + b - 2.0) * (2.0 * n + a + b - 1.0) * (2.0 * n + a + b);
        const double c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b);
        const double next = ((c2 + c3 * z) * pk - c4 * pkm1) / c1;
        pkm1 = pk;
        pk = next;
    }
    return pk;
}

// Generalized Laguerre L_n^{(a)}(z).
double laguerre_poly(int n, double a, double z) {
    if (n == 0) return 1.0;
    double lkm1 = 1.0;
    double lk = 1.0 + a - z;
    for (int j = 2; j <= n; ++j) {
        const double k = j;
        const double next = ((2.0 * k - 1.0 + a - z) * lk - (k - 1.0 + a) * lkm1) / k;
        lkm1 = lk;
        lk = next;
    }
    return lk;
}

}  // namespace

int BasisCatalog::compact_qubits() const {
    int n = 0;
    while ((1 << n) < size()) ++n;
    return n;
}

std::string BasisCatalog::bitstring(int index) const {
    const int n = compact_qubits();
    std::string s(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q)
        if (index & (1 << q)) s[static_cast<std::size_t>(n - 1 - q)] = '1';
    return s;
}

bool BasisCatalog::truncation_ok() const {
    for (const auto& st : states) {
        if (2 * st.n + std::abs(st.m) + 1 > nmax) return false;
        if (st.l < 0 || st.l > lmax) return false;
    }
    return true;
}

bool BasisCatalog::mj_uniform() const {
    for (const auto& st : states)
        if (st.mj() != states.front().mj()) return false;
    return true;
}

// Index layout (both catalogs): bit 0 = l; higher bits select the
// (s, sbar, n, m) sector. See notes on Tables II/VII in the tests.
BasisCatalog catalog_1_1() {
    BasisCatalog cat;
    cat.nmax = 1;
    cat.lmax = 1;
    cat.states = {
        {0, 0, 0, +1, -1},
        {0, 0, 1, +1, -1},
        {0, 0, 0, -1, +1},
        {0, 0, 1, -1, +1},
    };
    return cat;
}

BasisCatalog catalog_4_1() {
    BasisCatalog cat;
    cat.nmax = 4;
    cat.lmax = 1;
    // index = 8*[s=+1/2] + 4*[sbar=+1/2] + 2n + l, with m = -(s + sbar)
    for (int twos : {-1, +1})
        for (int twosbar : {-1, +1})
            for (int n : {0, 1})
                for (int l : {0, 1})
                    cat.states.push_back({n, -(twos + twosbar) / 2, l, twos, twosbar});
    return cat;
}

const PauliOperator& builtin_4_1_operator() {
    static const PauliOperator op = [] {
        PauliOperator o(4);
        for (const auto& t : kH41Terms) o.add_term(PauliString::from_string(t.s), t.c);
        return o;
    }();
    return op;
}

HamiltonianSource builtin_hamiltonian(HamiltonianLabel label) {
    HamiltonianSource src;
    src.label = label;
    switch (label) {
        case HamiltonianLabel::builtin_1_1: {
            src.matrix = Matrix(4, 4);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) src.matrix(i, j) = kH11[i][j];
            src.catalog = catalog_1_1();
            src.params = params_1_1();
            break;
        }
        case HamiltonianLabel::builtin_4_1: {
            src.matrix = reconstruct_matrix(builtin_4_1_operator());
            src.catalog = catalog_4_1();
            src.params = params_4_1();
            break;
        }
        default:
            throw std::invalid_argument("builtin_hamiltonian: unknown label");
    }
    return src;
}

HamiltonianSource builtin_hamiltonian(const std::string& label) {
    if (label == "builtin_1_1") return builtin_hamiltonian(HamiltonianLabel::builtin_1_1);
    if (label == "builtin_4_1") return builtin_hamiltonian(HamiltonianLabel::builtin_4_1);
    throw std::invalid_argument("builtin_hamiltonian: unknown label '" + label + "'");
}

BasisCatalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    BasisCatalog cat;
    cat.nmax = 1 << 20;  // no truncation check for user catalogs unless given
    cat.lmax = 1 << 20;
    std::string line;
    std::vector<std::pair<int, BlfqState>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int index, n, m, l, twos, twosbar;
        std::string bits;
        if (!(ls >> index >> n >> m >> l >> twos >> twosbar >> bits))
            throw std::runtime_error("bad catalog line: " + line);
        rows.push_back({index, {n, m, l, twos, twosbar}});
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != static_cast<int>(i))
            throw std::runtime_error("catalog indices must be 0..N-1 without gaps");
        cat.states.push_back(rows[i].second);
    }
    if (cat.states.empty()) throw std::runtime_error("empty catalog file: " + path);
    return cat;
}

HamiltonianSource load_external_hamiltonian(const std::string& matrix_path,
                                            const std::string& catalog_path,
                                            ModelParams params) {
    std::ifstream in(matrix_path);
    if (!in) throw std::runtime_error("cannot open Hamiltonian file: " + matrix_path);
    std::string tok, units;
    std::size_t dim = 0;
    in >> tok;
    if (tok != "dim") throw std::runtime_error("Hamiltonian file must start with 'dim N units MeV2'");
    in >> dim >> tok >> units;
    if (tok != "units" || units != "MeV2")
        throw std::runtime_error("Hamiltonian file must declare 'units MeV2'");
    if (dim == 0 || dim > 4096) throw std::runtime_error("unsupported Hamiltonian dimension");
    Matrix h(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            double v;
            if (!(in >> v)) throw std::runtime_error("truncated Hamiltonian file");
            h(i, j) = v;
        }
    if (h.hermiticity_defect() > 1e-9 * std::max(1.0, h.max_abs()))
        throw std::runtime_error("external Hamiltonian is not Hermitian");

    HamiltonianSource src;
    src.label = HamiltonianLabel::external;
    src.matrix = std::move(h);
    src.catalog = load_catalog_file(catalog_path);
    src.params = params;
    if (src.catalog.size() != static_cast<int>(src.matrix.rows()))
        throw std::runtime_error("catalog size does not match Hamiltonian dimension");
    return src;
}

void write_hamiltonian_file(const Matrix& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write Hamiltonian file: " + path);
    out << "dim " << h.rows() << " units MeV2\n";
    char buf[40];
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t j = 0; j < h.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", h(i, j).real());
            out << buf << (j + 1 == h.cols() ? "\n" : " ");
        }
    }
}

Matrix pad_to_power_of_two(const Matrix& h) {
    std::size_t dim = h.rows();
    std::size_t pow2 = 1;
    while (pow2 < dim) pow2 <<= 1;
    if (pow2 == dim) return h;
    // Gershgorin bound as a cheap max-eigenvalue estimate
    double bound = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim; ++j) row += std::abs(h(i, j));
        bound = std::max(bound, row);
    }
    Matrix out(pow2, pow2);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out(i, j) = h(i, j);
    const double penalty = 1e3 * std::max(1.0, bound);
    for (std::size_t i = dim; i < pow2; ++i) out(i, i) = penalty;
    return out;
}

EigenSystem exact_eigensolve(const Matrix& h) {
    const std::size_t n = h.rows();
    if (n == 0 || h.cols() != n) throw std::invalid_argument("eigensolve: square matrix required");
    if (n > 4096) throw std::invalid_argument("eigensolve: dimension cap is 4096");

    Matrix a = h;
    Matrix v = Matrix::identity(n);

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) norm += std::norm(a(i, j));
    norm = std::sqrt(norm);
    const double stop = 1e-12 * std::max(norm, 1e-300);

    auto offdiag = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < 100 && offdiag() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cxd apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) continue;
                // Hermitian Jacobi rotation annihilating a(p,q)
                const cxd phase = apq / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cxd s = t * c * phase;

                // columns: [p q] <- [p q] * [[c, conj(s)], [-s, c]] pattern
                for (std::size_t k = 0; k < n; ++k) {
                    const cxd akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - std::conj(s) * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cxd apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = std::conj(s) * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cxd vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(s) * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem sys;
    sys.values.resize(n);
    sys.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sys.values[k] = a(order[k], order[k]).real();
        // fix the phase: largest-magnitude component made real positive
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v(i, order[k]));
            if (m > best) {
                best = m;
                imax = i;
            }
        }
        cxd ph = v(imax, order[k]);
        ph = (std::abs(ph) > 0) ? std::conj(ph) / std::abs(ph) : cxd{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) sys.vectors(i, k) = v(i, order[k]) * ph;
    }
    return sys;
}

double chi_l(double x, int l, const ModelParams& params) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("chi_l: x must lie in (0,1)");
    if (l < 0) throw std::domain_error("chi_l: l must be nonnegative");
    const double a = params.alpha();
    const double b = params.beta();
    // log-Gamma for the normalization; alpha + l can make plain Gamma overflow
    const double log_norm = 0.5 * (std::log(4.0 * M_PI * (2.0 * l + a + b + 1.0)) +
                                   lgamma_s(l + 1.0) + lgamma_s(l + a + b + 1.0) -
                                   lgamma_s(l + a + 1.0) - lgamma_s(l + b + 1.0));
    return std::pow(x, b / 2.0) * std::pow(1.0 - x, a / 2.0) *
           jacobi_poly(l, a, b, 2.0 * x - 1.0) * std::exp(log_norm);
}

cxd phi_nm(double qx_mev, double qy_mev, int n, int m, double kappa_mev) {
    if (n < 0) throw std::domain_error("phi_nm: n must be nonnegative");
    const double q2 = qx_mev * qx_mev + qy_mev * qy_mev;
    const double q = std::sqrt(q2);
    const double am = std::abs(m);
    const double u = q2 / (kappa_mev * kappa_mev);
    const double log_norm = 0.5 * (std::log(4.0 * M_PI) + lgamma_s(n + 1.0) - lgamma_s(n + am + 1.0));
    const double radial = std::exp(log_norm) / kappa_mev * std::pow(q / kappa_mev, am) *
                          std::exp(-u / 2.0) * laguerre_poly(n, am, u);
    const double theta = std::atan2(qy_mev, qx_mev);
    return radial * std::polar(1.0, m * theta);
}

}  // namespace qblfq
