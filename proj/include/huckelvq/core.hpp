#pragma once

// Small dense matrices and a counter-based random source shared across the
// library.  Everything here is value-semantic; dimensions stay tiny (<= 64).

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace huckelvq {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Dense square matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    bool is_symmetric(double tol) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

    double max_abs_diff(const Matrix& other) const {
        double m = 0.0;
        for (std::size_t i = 0; i < a_.size(); ++i)
            m = std::max(m, std::abs(a_[i] - other.a_[i]));
        return m;
    }

    friend Matrix operator*(double s, const Matrix& m) {
        Matrix r(m.n_);
        for (std::size_t i = 0; i < m.a_.size(); ++i) r.a_[i] = s * m.a_[i];
        return r;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        Matrix r(a.n_);
        for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
        return r;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n) : n_(n), a_(n * n, cplx(0.0, 0.0)) {}

    std::size_t size() const { return n_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    cplx operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    double max_abs_imag() const {
        double m = 0.0;
        for (const cplx& z : a_) m = std::max(m, std::abs(z.imag()));
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

// Counter-based generator built on splitmix64.  Keying a fresh stream from
// (seed, a, b, c) makes draws independent of evaluation order, so parallel
// sampling stays deterministic.
class Rng {
public:
    explicit Rng(std::uint64_t state) : s_(state) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static Rng keyed(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
        std::uint64_t h = mix(seed);
        h = mix(h ^ a);
        h = mix(h ^ b);
        h = mix(h ^ c);
        return Rng(h);
    }

    std::uint64_t next_u64() {
        s_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // +1 or -1 with equal probability
    double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

private:
    std::uint64_t s_;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t(1) << k) < n) ++k;
    return k;
}

}  // namespace huckelvq
