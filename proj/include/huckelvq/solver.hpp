#pragma once

// VQE ground state, VQD excited-state sweep with overlap deflation, and the
// split-spectrum symVQD variant.
//
// All spectra are solved on the solver-signed operator, so ascending level
// order matches the conventional orbital-energy ordering.  Each level is
// found by minimizing E(theta) plus gamma-weighted squared overlaps against
// the previously found states; symVQD halves the deflation depth by solving
// the upper half of the spectrum on the negated operator.

#include <algorithm>
#include <cstdlib>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "huckelvq/core.hpp"
#include "huckelvq/molgraph.hpp"
#include "huckelvq/optim.hpp"
#include "huckelvq/pauli.hpp"
#include "huckelvq/simulator.hpp"

namespace huckelvq {

enum class SolveMode { ideal, noisy };
enum class SpuriousMode { filter, penalty };
enum class LevelSource { lower_half, upper_half };

struct SolveConfig {
    AnsatzSpec ansatz;
    OptimizerConfig optimizer;
    std::size_t restarts = 5;
    SolveMode mode = SolveMode::ideal;
    NoiseConfig noise;                  // used in noisy mode
    std::optional<double> gamma;        // deflation weight override
    std::uint64_t seed = 1;
    std::size_t threads = 0;            // 0 = HUCKEL_VQD_THREADS or hardware
};

struct Level {
    double energy = 0.0;
    std::vector<double> theta;
    std::vector<double> eigvec;         // real amplitudes, unit norm
    bool spurious = false;
    LevelSource source = LevelSource::lower_half;
};

struct SpectrumResult {
    std::vector<Level> levels;          // ascending by energy
    double gamma = 0.0;
    bool complete = true;               // false when a level failed
    std::string error;
};

struct ErrorMetrics {
    double avg_rel_error = 0.0;         // Fig.-3 style relative average
    double mean_abs_error = 0.0;
    std::vector<double> per_level_abs;
};

// Mean square sum of the observable's coefficients.
inline double compute_gamma(const PauliSum& H) {
    if (H.terms.empty()) throw std::invalid_argument("compute_gamma: empty Pauli sum");
    double s = 0.0;
    for (const PauliTerm& t : H.terms) s += t.coeff * t.coeff;
    return s;
}

namespace detail {

// Default deflation weight.  The coefficient-square rule can fall below the
// spectral range, which leaves a deflated state degenerate with (or below) a
// genuine excited level and derails the sweep.  The default is a strict
// upper bound on the range from the Gershgorin discs of the reconstructed
// matrix, plus 1: with gamma > E_max - E_min every deflated state lands
// above the whole remaining spectrum, and keeping gamma small limits how
// much a slightly-off snapshot perturbs later levels.
inline double safe_deflation_weight(const PauliSum& H) {
    const Matrix A = reconstruct(H);
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        double radius = 0.0;
        for (std::size_t j = 0; j < A.size(); ++j)
            if (j != i) radius += std::abs(A(i, j));
        lo = std::min(lo, A(i, i) - radius);
        hi = std::max(hi, A(i, i) + radius);
    }
    return hi - lo + 1.0;
}

inline std::size_t resolve_threads(std::size_t requested) {
    if (requested) return requested;
    if (const char* env = std::getenv("HUCKEL_VQD_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return std::size_t(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? std::min<std::size_t>(hc, 8) : 1;
}

// Runs `restarts` independent minimizations from uniform starting points in
// [-pi, pi]^d and keeps the best.  Restart r of level k draws from a stream
// keyed by (seed, k, r), so concurrency cannot change the outcome; ties
// break toward the lower restart index.
template <typename MakeObjective>
inline OptimResult run_restarts(const MakeObjective& make_objective, std::size_t dim,
                                const SolveConfig& cfg, std::size_t level) {
    const std::size_t n_threads = std::min(resolve_threads(cfg.threads), cfg.restarts);
    std::vector<OptimResult> results(cfg.restarts);
    auto run_one = [&](std::size_t r) {
        Rng rng = Rng::keyed(cfg.seed, level, r, 0x7133);
        std::vector<double> theta0(dim);
        for (double& t : theta0) t = rng.uniform(-kPi, kPi);
        OptimizerConfig oc = cfg.optimizer;
        oc.seed = Rng::mix(cfg.seed ^ Rng::mix(level ^ Rng::mix(r)));
        const Objective obj = make_objective(r);
        results[r] = minimize(obj, std::move(theta0), oc);
    };
    if (n_threads <= 1) {
        for (std::size_t r = 0; r < cfg.restarts; ++r) run_one(r);
    } else {
        for (std::size_t base = 0; base < cfg.restarts; base += n_threads) {
            std::vector<std::future<void>> wave;
            for (std::size_t r = base; r < std::min(base + n_threads, cfg.restarts); ++r)
                wave.push_back(std::async(std::launch::async, run_one, r));
            for (auto& f : wave) f.get();
        }
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < cfg.restarts; ++r)
        if (results[r].fval < results[best].fval) best = r;
    return results[best];
}

}  // namespace detail

// Statevector amplitudes of the optimized circuit; RY/CZ circuits are real,
// so any imaginary residue beyond roundoff is an error.
inline std::vector<double> extract_eigvec(const AnsatzSpec& ansatz,
                                          const std::vector<double>& theta) {
    const StateVector st = prepare(ansatz, theta);
    std::vector<double> v(st.amps.size());
    double norm2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(st.amps[i].imag()) > 1e-8)
            throw std::runtime_error("extract_eigvec: imaginary residue " +
                                     std::to_string(st.amps[i].imag()));
        v[i] = st.amps[i].real();
        norm2 += v[i] * v[i];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

// Flags levels whose weight on dummy basis states exceeds one half.
inline void classify_spurious(std::vector<Level>& levels,
                              const std::vector<std::size_t>& dummy_indices) {
    for (Level& lv : levels) {
        double w = 0.0;
        for (std::size_t d : dummy_indices) w += lv.eigvec[d] * lv.eigvec[d];
        lv.spurious = w > 0.5;
    }
}

// Adds a constant above the Gershgorin bound to the dummy diagonal entries,
// pushing spurious states to the top of the spectrum.
inline HuckelMatrix with_dummy_penalty(const HuckelMatrix& H) {
    if (!H.padded) throw std::logic_error("with_dummy_penalty: matrix not padded");
    double bound = 0.0;
    for (std::size_t i = 0; i < H.dim(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < H.dim(); ++j) row += std::abs(H.entries(i, j));
        bound = std::max(bound, row);
    }
    HuckelMatrix P = H;
    for (std::size_t d : H.dummy_indices) P.entries(d, d) += bound + 1.0;
    return P;
}

// Sequential deflation sweep for the lowest n_levels states of H (solver
// sign).  Levels come back ascending with spurious flags from the dummy
// weights of their extracted eigenvectors.
inline SpectrumResult vqd_spectrum(const PauliSum& H, std::size_t n_levels,
                                   const SolveConfig& cfg,
                                   const std::vector<std::size_t>& dummy_indices = {}) {
    cfg.ansatz.validate();
    const std::size_t dim = std::size_t(1) << cfg.ansatz.n_qubits;
    if (n_levels > dim)
        throw std::invalid_argument("vqd_spectrum: n_levels exceeds 2^N");
    const std::vector<PauliMask> masks = compile_masks(H);
    SpectrumResult out;
    out.gamma = cfg.gamma ? *cfg.gamma
                          : (H.terms.empty() ? 1.0 : detail::safe_deflation_weight(H));

    std::vector<StateVector> snapshots;
    std::vector<std::vector<double>> snapshot_thetas;
    for (std::size_t k = 0; k < n_levels; ++k) {
        auto make_objective = [&](std::size_t restart) -> Objective {
            if (cfg.mode == SolveMode::ideal) {
                return [&, k](const std::vector<double>& theta) {
                    const StateVector st = prepare(cfg.ansatz, theta);
                    double f = expectation(st, masks);
                    for (const StateVector& snap : snapshots)
                        f += out.gamma * overlap_sq(st, snap);
                    return f;
                };
            }
            // Noisy objective: every evaluation draws a fresh, deterministic
            // noise stream keyed by (seed, level, restart, eval counter).
            auto counter = std::make_shared<std::uint64_t>(0);
            return [&, k, restart, counter](const std::vector<double>& theta) {
                const std::uint64_t tag = (*counter)++;
                NoiseConfig nc = cfg.noise;
                nc.seed = Rng::mix(cfg.seed ^ Rng::mix(k ^ Rng::mix(restart ^ Rng::mix(tag))));
                double f = sampled_expectation(cfg.ansatz, theta, H, nc);
                for (std::size_t j = 0; j < snapshot_thetas.size(); ++j)
                    f += out.gamma * sampled_zero_probability(cfg.ansatz, theta,
                                                              snapshot_thetas[j], nc, j + 1);
                return f;
            };
        };
        OptimResult best;
        try {
            best = detail::run_restarts(make_objective, cfg.ansatz.n_params(), cfg, k);
        } catch (const std::exception& e) {
            out.complete = false;
            out.error = "level " + std::to_string(k) + ": " + e.what();
            break;
        }
        Level lv;
        lv.theta = best.theta;
        const StateVector st = prepare(cfg.ansatz, best.theta);
        // The reported energy is always the exact expectation at the optimized
        // parameters: in noisy mode the noise lives in the optimization loop,
        // and quoting a sampled readout would just add readout/depolarizing
        // attenuation bias on top of the converged result.
        lv.energy = expectation(st, masks);
        lv.eigvec = extract_eigvec(cfg.ansatz, best.theta);
        out.levels.push_back(std::move(lv));
        snapshots.push_back(st);
        snapshot_thetas.push_back(best.theta);
    }
    classify_spurious(out.levels, dummy_indices);
    std::stable_sort(out.levels.begin(), out.levels.end(),
                     [](const Level& a, const Level& b) { return a.energy < b.energy; });
    return out;
}

// Ground state only.
inline std::pair<double, std::vector<double>> vqe_ground(const PauliSum& H,
                                                         const SolveConfig& cfg) {
    SpectrumResult r = vqd_spectrum(H, 1, cfg);
    if (!r.complete) throw std::runtime_error("vqe_ground: " + r.error);
    return {r.levels[0].energy, r.levels[0].theta};
}

// Split-spectrum sweep: the lower half of the spectrum from H and the upper
// half from -H (energies negated), merged ascending.  Deflation depth of any
// level is at most ceil(n/2).
inline SpectrumResult symvqd_spectrum(const PauliSum& H, const SolveConfig& cfg,
                                      const std::vector<std::size_t>& dummy_indices = {}) {
    const std::size_t n = std::size_t(1) << cfg.ansatz.n_qubits;
    const std::size_t lower_count = (n + 1) / 2;
    const std::size_t upper_count = n / 2;

    SolveConfig upper_cfg = cfg;
    upper_cfg.seed = Rng::mix(cfg.seed ^ 0x5D5D5D5DULL);
    const PauliSum negH = negated(H);

    SpectrumResult lower, upper;
    const std::size_t n_threads = detail::resolve_threads(cfg.threads);
    if (n_threads >= 2) {
        auto fut = std::async(std::launch::async, [&]() {
            return vqd_spectrum(negH, upper_count, upper_cfg, dummy_indices);
        });
        lower = vqd_spectrum(H, lower_count, cfg, dummy_indices);
        upper = fut.get();
    } else {
        lower = vqd_spectrum(H, lower_count, cfg, dummy_indices);
        upper = vqd_spectrum(negH, upper_count, upper_cfg, dummy_indices);
    }

    SpectrumResult out;
    out.gamma = lower.gamma;
    out.complete = lower.complete && upper.complete;
    out.error = !lower.error.empty() ? lower.error : upper.error;
    out.levels = lower.levels;
    for (Level lv : upper.levels) {
        lv.energy = -lv.energy;
        lv.source = LevelSource::upper_half;
        out.levels.push_back(std::move(lv));
    }
    std::stable_sort(out.levels.begin(), out.levels.end(),
                     [](const Level& a, const Level& b) { return a.energy < b.energy; });
    return out;
}

// Fig.-3 style average relative error plus per-level absolute errors.
// Exact levels below 1e-9 in magnitude are excluded from the relative
// average (the ratio is undefined there) but kept in the absolute list.
inline ErrorMetrics avg_error(const std::vector<double>& solved,
                              const std::vector<double>& exact) {
    if (solved.size() != exact.size())
        throw std::invalid_argument("avg_error: level count mismatch (" +
                                    std::to_string(solved.size()) + " vs " +
                                    std::to_string(exact.size()) + ")");
    ErrorMetrics m;
    double rel_sum = 0.0;
    std::size_t rel_n = 0;
    for (std::size_t i = 0; i < solved.size(); ++i) {
        m.per_level_abs.push_back(std::abs(solved[i] - exact[i]));
        m.mean_abs_error += m.per_level_abs.back();
        if (std::abs(exact[i]) >= 1e-9) {
            rel_sum += (std::abs(exact[i]) - std::abs(solved[i])) / std::abs(exact[i]);
            ++rel_n;
        }
    }
    if (!solved.empty()) m.mean_abs_error /= double(solved.size());
    m.avg_rel_error = rel_n ? std::abs(rel_sum) / double(rel_n) : 0.0;
    return m;
}

}  // namespace huckelvq
