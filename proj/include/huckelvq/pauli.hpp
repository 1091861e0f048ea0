#pragma once

// Pauli-string algebra and the two Hamiltonian-to-qubit transformations.
//
// A Pauli string is a tensor product over {I,X,Y,Z}; the leftmost letter
// acts on the highest-order basis bit.  The 4^N strings are orthogonal under
// the trace inner product, so a real symmetric 2^N x 2^N matrix projects
// onto them with coefficients tr(P*H)/2^N.  The gradient-fit route reaches
// the same coefficients iteratively by minimizing the elementwise squared
// error; it is kept as an independent cross-check of the projection.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "huckelvq/core.hpp"
#include "huckelvq/molgraph.hpp"

namespace huckelvq {

inline constexpr double kCoeffDropThreshold = 1e-10;

struct PauliString {
    std::string letters;

    PauliString() = default;
    explicit PauliString(std::string s) : letters(std::move(s)) { validate(); }

    void validate() const {
        if (letters.empty()) throw std::invalid_argument("empty Pauli string");
        for (char c : letters)
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
                throw std::invalid_argument("bad Pauli letter '" + std::string(1, c) + "'");
    }

    std::size_t n_qubits() const { return letters.size(); }
};

struct PauliTerm {
    double coeff = 0.0;
    std::string string;
};

struct PauliSum {
    std::size_t n_qubits = 0;
    std::vector<PauliTerm> terms;  // unique strings, lexicographic I<X<Y<Z
};

// Sparse form of one string: P|i> = phase * (-1)^popcount(i & zmask) |i ^ xmask>
// with phase = i^{#Y}.  Each Pauli matrix has exactly one nonzero per column.
struct PauliMask {
    double coeff = 0.0;
    std::uint64_t xmask = 0;
    std::uint64_t zmask = 0;
    cplx phase{1.0, 0.0};
};

inline PauliMask make_mask(double coeff, const std::string& letters) {
    PauliMask m;
    m.coeff = coeff;
    const std::size_t n = letters.size();
    int ycount = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const std::uint64_t bit = std::uint64_t(1) << (n - 1 - p);
        switch (letters[p]) {
            case 'X': m.xmask |= bit; break;
            case 'Y': m.xmask |= bit; m.zmask |= bit; ++ycount; break;
            case 'Z': m.zmask |= bit; break;
            default: break;
        }
    }
    static constexpr cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    m.phase = ipow[ycount & 3];
    return m;
}

inline std::vector<PauliMask> compile_masks(const PauliSum& s) {
    std::vector<PauliMask> out;
    out.reserve(s.terms.size());
    for (const PauliTerm& t : s.terms) out.push_back(make_mask(t.coeff, t.string));
    return out;
}

inline CMatrix string_matrix(const PauliString& p) {
    const std::size_t dim = std::size_t(1) << p.n_qubits();
    const PauliMask m = make_mask(1.0, p.letters);
    CMatrix out(dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const double sign = (std::popcount(std::uint64_t(col) & m.zmask) & 1) ? -1.0 : 1.0;
        out(col ^ m.xmask, col) = m.phase * sign;
    }
    return out;
}

namespace detail {

// Enumerate string index 0..4^N-1 as base-4 digits in I<X<Y<Z order, matching
// lexicographic string order.
inline std::string index_to_string(std::size_t idx, std::size_t n) {
    static constexpr char letters[4] = {'I', 'X', 'Y', 'Z'};
    std::string s(n, 'I');
    for (std::size_t p = n; p-- > 0;) {
        s[p] = letters[idx & 3];
        idx >>= 2;
    }
    return s;
}

// tr(P * A) using the one-nonzero-per-column structure of P.
inline cplx masked_trace(const PauliMask& m, const Matrix& A) {
    const std::size_t dim = A.size();
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
        const std::size_t r = c ^ m.xmask;
        const double sign = (std::popcount(std::uint64_t(r) & m.zmask) & 1) ? -1.0 : 1.0;
        acc += sign * A(c, r);  // P_{c,r} * A_{r,c}
    }
    return m.phase * acc;
}

inline void check_decomposable(const HuckelMatrix& H) {
    if (!is_power_of_two(H.dim()))
        throw std::invalid_argument("decompose: dimension is not a power of two (pad first)");
    if (!H.entries.is_symmetric(1e-9))
        throw std::invalid_argument("decompose: matrix is not symmetric");
}

}  // namespace detail

// Frobenius projection: coeff = tr(P_alpha * H) / 2^N for each of the 4^N
// strings; near-zero coefficients are dropped.
inline PauliSum frobenius_decompose(const HuckelMatrix& H) {
    detail::check_decomposable(H);
    const std::size_t n = log2_exact(H.dim());
    const double norm = double(H.dim());
    PauliSum out;
    out.n_qubits = n;
    const std::size_t count = std::size_t(1) << (2 * n);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const std::string s = detail::index_to_string(idx, n);
        const cplx tr = detail::masked_trace(make_mask(1.0, s), H.entries);
        const double coeff = tr.real() / norm;
        // odd-Y strings have purely imaginary entries; they vanish for
        // symmetric H and any imaginary residue is roundoff
        if (std::abs(coeff) > kCoeffDropThreshold) out.terms.push_back({coeff, s});
    }
    return out;
}

inline Matrix reconstruct(const PauliSum& s) {
    const std::size_t dim = std::size_t(1) << s.n_qubits;
    CMatrix acc(dim);
    for (const PauliTerm& t : s.terms) {
        const PauliMask m = make_mask(t.coeff, t.string);
        for (std::size_t c = 0; c < dim; ++c) {
            const double sign =
                (std::popcount(std::uint64_t(c) & m.zmask) & 1) ? -1.0 : 1.0;
            acc(c ^ m.xmask, c) += t.coeff * m.phase * sign;
        }
    }
    if (acc.max_abs_imag() > 1e-12)
        throw std::runtime_error("reconstruct: residual imaginary part " +
                                 std::to_string(acc.max_abs_imag()));
    Matrix out(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out(i, j) = acc(i, j).real();
    return out;
}

struct FitConfig {
    double learning_rate = 0.1;
    std::size_t max_iterations = 1000000;
    double epsilon_target = 1e-12;       // stop when mean squared error drops below
    double min_rel_improvement = 1e-14;  // or when epsilon stops improving
};

// Gradient fit of all 4^N coefficients from zero initialization, minimizing
// the mean squared elementwise error between H and the predicted matrix.
// The loss is a convex quadratic, so plain gradient descent converges to the
// Frobenius projection; kept as an independent route for cross-checks.
inline PauliSum fit_decompose(const HuckelMatrix& H, const FitConfig& config = {}) {
    detail::check_decomposable(H);
    const std::size_t n = log2_exact(H.dim());
    const std::size_t dim = H.dim();
    const std::size_t count = std::size_t(1) << (2 * n);
    const double k_elems = double(dim) * double(dim);

    std::vector<PauliMask> masks(count);
    for (std::size_t idx = 0; idx < count; ++idx)
        masks[idx] = make_mask(0.0, detail::index_to_string(idx, n));

    std::vector<double> coeff(count, 0.0);
    CMatrix resid(dim);
    double eps_prev = -1.0;
    double eps = 0.0;
    bool converged = false;
    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        // residual = prediction - H
        resid = CMatrix(dim);
        for (std::size_t idx = 0; idx < count; ++idx) {
            if (coeff[idx] == 0.0) continue;
            const PauliMask& m = masks[idx];
            for (std::size_t c = 0; c < dim; ++c) {
                const double sign =
                    (std::popcount(std::uint64_t(c) & m.zmask) & 1) ? -1.0 : 1.0;
                resid(c ^ m.xmask, c) += coeff[idx] * m.phase * sign;
            }
        }
        eps = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                const cplx r = resid(i, j) - H.entries(i, j);
                resid(i, j) = r;
                eps += std::norm(r);
            }
        eps /= k_elems;
        if (eps < config.epsilon_target) {
            converged = true;
            break;
        }
        if (eps_prev >= 0.0 && eps_prev - eps < config.min_rel_improvement * eps_prev) {
            converged = true;
            break;
        }
        eps_prev = eps;
        // gradient of eps wrt coeff[idx] is (2/k) Re<P_idx, residual>
        for (std::size_t idx = 0; idx < count; ++idx) {
            const PauliMask& m = masks[idx];
            cplx tr = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const std::size_t r = c ^ m.xmask;
                const double sign =
                    (std::popcount(std::uint64_t(r) & m.zmask) & 1) ? -1.0 : 1.0;
                tr += sign * resid(r, c);
            }
            tr *= m.phase;
            coeff[idx] -= config.learning_rate * 2.0 / k_elems * tr.real();
        }
    }
    if (!converged)
        throw std::runtime_error("fit_decompose: no convergence within " +
                                 std::to_string(config.max_iterations) +
                                 " iterations (epsilon=" + std::to_string(eps) + ")");
    PauliSum out;
    out.n_qubits = n;
    for (std::size_t idx = 0; idx < count; ++idx)
        if (std::abs(coeff[idx]) > kCoeffDropThreshold)
            out.terms.push_back({coeff[idx], detail::index_to_string(idx, n)});
    return out;
}

inline PauliSum negated(const PauliSum& s) {
    PauliSum out = s;
    for (PauliTerm& t : out.terms) t.coeff = -t.coeff;
    return out;
}

// Textual format: one "<coeff> <string>" per line, 10 significant digits.
inline std::string to_text(const PauliSum& s) {
    std::string out;
    char buf[64];
    for (const PauliTerm& t : s.terms) {
        std::snprintf(buf, sizeof buf, "%.10g %s\n", t.coeff, t.string.c_str());
        out += buf;
    }
    return out;
}

inline PauliSum parse_pauli_sum(std::istream& in) {
    PauliSum out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        double coeff;
        std::string letters;
        if (!(ls >> coeff)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument("pauli sum line " + std::to_string(lineno) +
                                        ": expected '<coeff> <string>'");
        }
        if (!(ls >> letters))
            throw std::invalid_argument("pauli sum line " + std::to_string(lineno) +
                                        ": missing Pauli string");
        PauliString p(letters);
        if (out.n_qubits == 0)
            out.n_qubits = p.n_qubits();
        else if (p.n_qubits() != out.n_qubits)
            throw std::invalid_argument("pauli sum line " + std::to_string(lineno) +
                                        ": inconsistent string length");
        out.terms.push_back({coeff, letters});
    }
    std::sort(out.terms.begin(), out.terms.end(),
              [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
    return out;
}

}  // namespace huckelvq
