#include "qblfq/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qblfq {

namespace {

constexpr char kFactorChar[4] = {'I', 'X', 'Y', 'Z'};

PauliFactor factor_from_char(char c) {
    switch (c) {
        case 'I': return PauliFactor::I;
        case 'X': return PauliFactor::X;
        case 'Y': return PauliFactor::Y;
        case 'Z': return PauliFactor::Z;
        default: throw std::invalid_argument(std::string("bad Pauli character: ") + c);
    }
}

// single-qubit products: a*b = i^phase_exp[a][b] * result[a][b]
constexpr std::uint8_t kProd[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
// exponent of i in a*b, indexed [a][b]
constexpr std::uint8_t kPhaseExp[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},   // XY = iZ, XZ = -iY
    {0, 3, 0, 1},   // YX = -iZ, YZ = iX
    {0, 1, 3, 0},   // ZX = iY,  ZY = -iX
};

cxd phase_from_exp(int e) {
    switch (e & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

PauliString::PauliString(int n_qubits, const std::string& text)
    : factors_(static_cast<std::size_t>(n_qubits), PauliFactor::I) {
    if (static_cast<int>(text.size()) != n_qubits)
        throw std::invalid_argument("Pauli string length mismatch");
    for (int q = 0; q < n_qubits; ++q)
        factors_[static_cast<std::size_t>(q)] = factor_from_char(text[static_cast<std::size_t>(n_qubits - 1 - q)]);
}

bool PauliString::is_identity() const {
    return std::all_of(factors_.begin(), factors_.end(),
                       [](PauliFactor f) { return f == PauliFactor::I; });
}

int PauliString::weight() const {
    int w = 0;
    for (auto f : factors_)
        if (f != PauliFactor::I) ++w;
    return w;
}

std::uint64_t PauliString::x_mask() const {
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < factors_.size(); ++q)
        if (factors_[q] == PauliFactor::X || factors_[q] == PauliFactor::Y) m |= 1ULL << q;
    return m;
}

std::uint64_t PauliString::z_mask() const {
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < factors_.size(); ++q)
        if (factors_[q] == PauliFactor::Z || factors_[q] == PauliFactor::Y) m |= 1ULL << q;
    return m;
}

int PauliString::y_count() const {
    int c = 0;
    for (auto f : factors_)
        if (f == PauliFactor::Y) ++c;
    return c;
}

std::string PauliString::to_string() const {
    std::string s(factors_.size(), 'I');
    const int n = n_qubits();
    for (int q = 0; q < n; ++q)
        s[static_cast<std::size_t>(n - 1 - q)] =
            kFactorChar[static_cast<int>(factors_[static_cast<std::size_t>(q)])];
    return s;
}

PauliString PauliString::from_string(const std::string& text) {
    return PauliString(static_cast<int>(text.size()), text);
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("Pauli product: qubit count mismatch");
    PauliString out(a.n_qubits());
    int phase_exp = 0;
    for (int q = 0; q < a.n_qubits(); ++q) {
        const int fa = static_cast<int>(a.factor(q));
        const int fb = static_cast<int>(b.factor(q));
        out.set_factor(q, static_cast<PauliFactor>(kProd[fa][fb]));
        phase_exp += kPhaseExp[fa][fb];
    }
    return {phase_from_exp(phase_exp), out};
}

bool commutes_qubitwise(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("commutes_qubitwise: qubit count mismatch");
    for (int q = 0; q < a.n_qubits(); ++q) {
        const auto fa = a.factor(q);
        const auto fb = b.factor(q);
        if (fa != PauliFactor::I && fb != PauliFactor::I && fa != fb) return false;
    }
    return true;
}

cxd pauli_basis_phase(const PauliString& p, std::uint64_t j) {
    // Z contributes (-1)^bit, Y contributes i * (-1)^bit.
    const std::uint64_t zbits = p.z_mask() & j;
    int minus = std::popcount(zbits) & 1;
    int ycount = p.y_count();
    cxd phase = phase_from_exp(ycount);
    return minus ? -phase : phase;
}

void PauliOperator::add_term(const PauliString& s, cxd coeff) {
    if (s.n_qubits() != n_qubits_)
        throw std::invalid_argument("PauliOperator term qubit count mismatch");
    auto [it, inserted] = terms_.try_emplace(s, coeff);
    if (!inserted) {
        it->second += coeff;
        if (std::abs(it->second) == 0.0) terms_.erase(it);
    }
}

cxd PauliOperator::coefficient(const PauliString& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? cxd{} : it->second;
}

PauliOperator& PauliOperator::operator+=(const PauliOperator& o) {
    if (o.n_qubits_ != n_qubits_)
        throw std::invalid_argument("PauliOperator sum qubit count mismatch");
    for (const auto& [s, c] : o.terms_) add_term(s, c);
    return *this;
}

PauliOperator& PauliOperator::operator*=(cxd s) {
    for (auto& [k, c] : terms_) c *= s;
    return *this;
}

double PauliOperator::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [s, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

void PauliOperator::prune(double rel_tol) {
    const double cut = rel_tol * max_abs_coefficient();
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= cut)
            it = terms_.erase(it);
        else
            ++it;
    }
}

bool PauliOperator::is_hermitian(double tol) const {
    const double scale = std::max(1.0, max_abs_coefficient());
    for (const auto& [s, c] : terms_)
        if (std::abs(c.imag()) > tol * scale) return false;
    return true;
}

PauliOperator PauliOperator::adjoint() const {
    PauliOperator out(n_qubits_);
    for (const auto& [s, c] : terms_) out.add_term(s, std::conj(c));
    return out;
}

std::string PauliOperator::to_text() const {
    std::string out;
    char buf[80];
    for (const auto& [s, c] : terms_) {
        if (std::abs(c.imag()) > 1e-14 * std::max(1.0, std::abs(c))) {
            std::snprintf(buf, sizeof buf, "(%.17g,%.17g) ", c.real(), c.imag());
        } else {
            std::snprintf(buf, sizeof buf, "%.17g ", c.real());
        }
        out += buf;
        out += s.to_string();
        out += '\n';
    }
    return out;
}

PauliOperator PauliOperator::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    PauliOperator out;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string coeff_tok, str_tok;
        if (!(ls >> coeff_tok >> str_tok))
            throw std::invalid_argument("bad operator line: " + line);
        cxd c;
        if (coeff_tok.front() == '(') {
            double re = 0, im = 0;
            if (std::sscanf(coeff_tok.c_str(), "(%lg,%lg)", &re, &im) != 2)
                throw std::invalid_argument("bad complex coefficient: " + coeff_tok);
            c = {re, im};
        } else {
            c = {std::stod(coeff_tok), 0.0};
        }
        PauliString s = PauliString::from_string(str_tok);
        if (first) {
            out = PauliOperator(s.n_qubits());
            first = false;
        }
        out.add_term(s, c);
    }
    if (first) throw std::invalid_argument("empty operator text");
    return out;
}

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("operator product qubit count mismatch");
    PauliOperator out(a.n_qubits());
    for (const auto& [sa, ca] : a.terms())
        for (const auto& [sb, cb] : b.terms()) {
            auto prod = multiply(sa, sb);
            out.add_term(prod.string, ca * cb * prod.phase);
        }
    return out;
}

std::vector<std::vector<PauliTerm>> group_commuting(const PauliOperator& op) {
    std::vector<PauliTerm> terms;
    terms.reserve(op.n_terms());
    for (const auto& [s, c] : op.terms()) terms.push_back({s, c});
    std::sort(terms.begin(), terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
        const double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
        if (ma != mb) return ma > mb;
        return a.string < b.string;
    });

    std::vector<std::vector<PauliTerm>> groups;
    for (const auto& t : terms) {
        bool placed = false;
        for (auto& g : groups) {
            bool ok = true;
            for (const auto& m : g)
                if (!commutes_qubitwise(t.string, m.string)) {
                    ok = false;
                    break;
                }
            if (ok) {
                g.push_back(t);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({t});
    }
    return groups;
}

PauliOperator jw_lower(int mode, int n_qubits) {
    if (mode < 0 || mode >= n_qubits)
        throw std::out_of_range("jw_lower: mode index out of range");
    PauliString sx(n_qubits), sy(n_qubits);
    for (int i = 0; i < mode; ++i) {
        sx.set_factor(i, PauliFactor::Z);
        sy.set_factor(i, PauliFactor::Z);
    }
    sx.set_factor(mode, PauliFactor::X);
    sy.set_factor(mode, PauliFactor::Y);
    PauliOperator out(n_qubits);
    out.add_term(sx, {0.5, 0.0});
    out.add_term(sy, {0.0, 0.5});
    return out;
}

PauliOperator jw_raise(int mode, int n_qubits) { return jw_lower(mode, n_qubits).adjoint(); }

PauliOperator jw_encode_one_body(const Matrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("one-body matrix must be square");
    const int n = static_cast<int>(h.rows());
    if (h.hermiticity_defect() > 1e-9 * std::max(1.0, h.max_abs()))
        throw std::invalid_argument("one-body matrix must be Hermitian");
    PauliOperator out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cxd hij = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (std::abs(hij) == 0.0) continue;
            PauliOperator term = multiply(jw_raise(i, n), jw_lower(j, n));
            term *= hij;
            out += term;
        }
    out.prune();
    return out;
}

PauliOperator compact_encode(const Matrix& h, double rel_drop_tol) {
    const std::size_t dim = h.rows();
    if (dim == 0 || h.cols() != dim) throw std::invalid_argument("compact_encode: square matrix required");
    if ((dim & (dim - 1)) != 0)
        throw std::invalid_argument("compact_encode: dimension must be a power of two");
    if (h.hermiticity_defect() > 1e-9 * std::max(1.0, h.max_abs()))
        throw std::invalid_argument("compact_encode: matrix must be Hermitian");
    int n = 0;
    while ((1ULL << n) < dim) ++n;

    PauliOperator out(n);
    const std::uint64_t n_strings = 1ULL << (2 * n);
    for (std::uint64_t code = 0; code < n_strings; ++code) {
        PauliString p(n);
        std::uint64_t c = code;
        for (int q = 0; q < n; ++q) {
            p.set_factor(q, static_cast<PauliFactor>(c & 3));
            c >>= 2;
        }
        const std::uint64_t xm = p.x_mask();
        cxd tr = 0.0;
        for (std::uint64_t k = 0; k < dim; ++k) {
            const std::uint64_t k2 = k ^ xm;
            if (k2 >= dim) continue;
            tr += pauli_basis_phase(p, k) * h(k, k2);
        }
        if (std::abs(tr) > 0.0) out.add_term(p, tr / static_cast<double>(dim));
    }
    out.prune(rel_drop_tol);
    return out;
}

Matrix reconstruct_matrix(const PauliOperator& op, int max_qubits) {
    if (op.n_qubits() > max_qubits)
        throw std::invalid_argument("reconstruct_matrix: qubit count exceeds cap");
    const std::uint64_t dim = 1ULL << op.n_qubits();
    Matrix m(dim, dim);
    for (const auto& [s, c] : op.terms()) {
        const std::uint64_t xm = s.x_mask();
        for (std::uint64_t k = 0; k < dim; ++k)
            m(k ^ xm, k) += c * pauli_basis_phase(s, k);
    }
    return m;
}

}  // namespace qblfq
