#pragma once

// Deterministic statevector engine.
//
// The ansatz is the layered TwoLocal circuit: one Hadamard layer, then
// `reps` blocks of (RY layer, CZ entangling block), then a final RY layer,
// for n_qubits * (reps + 1) parameters.  RY/CZ circuits keep amplitudes
// real, which is all the real symmetric operators here need.
//
// Shot sampling draws every random number from a counter generator keyed by
// (seed, term, shot), so results are bit-identical regardless of evaluation
// order or thread schedule.

#include <bit>
#include <span>
#include <utility>
#include <vector>

#include "huckelvq/core.hpp"
#include "huckelvq/pauli.hpp"

namespace huckelvq {

struct StateVector {
    std::vector<cplx> amps;

    std::size_t n_qubits() const { return log2_exact(amps.size()); }

    double norm() const {
        double s = 0.0;
        for (const cplx& a : amps) s += std::norm(a);
        return std::sqrt(s);
    }
};

// CZ entangler layout per repetition block.  All CZs commute, so each block
// applies one fixed diagonal; `linear` (the chain q_i–q_{i+1}) generates only
// a proper subgroup of the real rotations for n >= 3 and provably cannot
// reach every eigenvector (e.g. the degenerate benzene pairs), while `full`
// (every pair) restores transitivity.  `full` is therefore the default.
enum class Entangler { linear, full };

struct AnsatzSpec {
    std::size_t n_qubits = 1;
    std::size_t reps = 1;  // repetition blocks, >= 1
    Entangler entangler = Entangler::full;

    std::size_t n_params() const { return n_qubits * (reps + 1); }

    // CZ pairs of one entangling block, in application order.
    std::vector<std::pair<std::size_t, std::size_t>> cz_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        if (entangler == Entangler::linear) {
            for (std::size_t q = 0; q + 1 < n_qubits; ++q) out.emplace_back(q, q + 1);
        } else {
            for (std::size_t i = 0; i + 1 < n_qubits; ++i)
                for (std::size_t j = i + 1; j < n_qubits; ++j) out.emplace_back(i, j);
        }
        return out;
    }

    void validate() const {
        if (n_qubits < 1) throw std::invalid_argument("ansatz: need at least one qubit");
        if (reps < 1) throw std::invalid_argument("ansatz: reps must be >= 1");
    }
};

// Default repetition blocks per qubit count; overridable everywhere.
inline std::size_t default_reps(std::size_t n_qubits) {
    switch (n_qubits) {
        case 1: return 2;
        case 2: return 4;
        case 3: return 6;
        case 6: return 9;
        default: return 2 * n_qubits;
    }
}

namespace gates {

inline void ry(std::vector<cplx>& amps, std::size_t q, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const std::size_t bit = std::size_t(1) << q;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & bit) continue;
        const cplx a0 = amps[i], a1 = amps[i | bit];
        amps[i] = c * a0 - s * a1;
        amps[i | bit] = s * a0 + c * a1;
    }
}

inline void hadamard(std::vector<cplx>& amps, std::size_t q) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::size_t bit = std::size_t(1) << q;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & bit) continue;
        const cplx a0 = amps[i], a1 = amps[i | bit];
        amps[i] = inv_sqrt2 * (a0 + a1);
        amps[i | bit] = inv_sqrt2 * (a0 - a1);
    }
}

inline void cz(std::vector<cplx>& amps, std::size_t q1, std::size_t q2) {
    const std::size_t mask = (std::size_t(1) << q1) | (std::size_t(1) << q2);
    for (std::size_t i = 0; i < amps.size(); ++i)
        if ((i & mask) == mask) amps[i] = -amps[i];
}

inline void sdg(std::vector<cplx>& amps, std::size_t q) {
    const std::size_t bit = std::size_t(1) << q;
    for (std::size_t i = 0; i < amps.size(); ++i)
        if (i & bit) amps[i] *= cplx(0.0, -1.0);
}

// single-qubit Pauli, which in {1=X, 2=Y, 3=Z}
inline void pauli(std::vector<cplx>& amps, std::size_t q, int which) {
    const std::size_t bit = std::size_t(1) << q;
    switch (which) {
        case 1:
            for (std::size_t i = 0; i < amps.size(); ++i)
                if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
            break;
        case 2:
            for (std::size_t i = 0; i < amps.size(); ++i)
                if (!(i & bit)) {
                    const cplx a0 = amps[i];
                    amps[i] = cplx(0.0, -1.0) * amps[i | bit];
                    amps[i | bit] = cplx(0.0, 1.0) * a0;
                }
            break;
        case 3:
            for (std::size_t i = 0; i < amps.size(); ++i)
                if (i & bit) amps[i] = -amps[i];
            break;
        default: break;
    }
}

}  // namespace gates

inline StateVector prepare(const AnsatzSpec& ansatz, std::span<const double> theta) {
    ansatz.validate();
    if (theta.size() != ansatz.n_params())
        throw std::invalid_argument("prepare: expected " + std::to_string(ansatz.n_params()) +
                                    " parameters, got " + std::to_string(theta.size()));
    const std::size_t n = ansatz.n_qubits;
    StateVector st;
    st.amps.assign(std::size_t(1) << n, cplx(0.0, 0.0));
    st.amps[0] = 1.0;
    for (std::size_t q = 0; q < n; ++q) gates::hadamard(st.amps, q);
    std::size_t p = 0;
    const auto pairs = ansatz.cz_pairs();
    for (std::size_t block = 0; block < ansatz.reps; ++block) {
        for (std::size_t q = 0; q < n; ++q) gates::ry(st.amps, q, theta[p++]);
        for (const auto& [a, b] : pairs) gates::cz(st.amps, a, b);
    }
    for (std::size_t q = 0; q < n; ++q) gates::ry(st.amps, q, theta[p++]);
    return st;
}

inline double expectation(const StateVector& state, const std::vector<PauliMask>& masks) {
    const std::size_t dim = state.amps.size();
    cplx total = 0.0;
    for (const PauliMask& m : masks) {
        if ((m.xmask | m.zmask) >= dim)
            throw std::invalid_argument("expectation: operator/state dimension mismatch");
        if ((m.xmask | m.zmask) == 0) {  // identity contributes exactly
            total += m.coeff;
            continue;
        }
        cplx acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double sign = (std::popcount(std::uint64_t(i) & m.zmask) & 1) ? -1.0 : 1.0;
            acc += std::conj(state.amps[i ^ m.xmask]) * (m.phase * sign) * state.amps[i];
        }
        total += m.coeff * acc;
    }
    if (std::abs(total.imag()) > 1e-10)
        throw std::runtime_error("expectation: imaginary residue " +
                                 std::to_string(total.imag()));
    return total.real();
}

inline double expectation(const StateVector& state, const PauliSum& H) {
    if (H.n_qubits != state.n_qubits())
        throw std::invalid_argument("expectation: operator acts on " +
                                    std::to_string(H.n_qubits) + " qubits, state has " +
                                    std::to_string(state.n_qubits()));
    return expectation(state, compile_masks(H));
}

inline double overlap_sq(const StateVector& a, const StateVector& b) {
    if (a.amps.size() != b.amps.size())
        throw std::invalid_argument("overlap_sq: dimension mismatch");
    cplx ip = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i) ip += std::conj(a.amps[i]) * b.amps[i];
    return std::norm(ip);
}

// Layer count with gates on disjoint qubits sharing a layer.  The CZ chain
// packs into two layers (odd/even pairs), one layer for two qubits.
inline std::size_t circuit_depth(const AnsatzSpec& ansatz) {
    ansatz.validate();
    const std::size_t n = ansatz.n_qubits;
    std::size_t cz_layers = 0;
    if (n == 2) {
        cz_layers = 1;
    } else if (n >= 3) {
        // linear chain packs into even/odd layers; full entanglement needs a
        // proper edge coloring of K_n (n-1 layers for even n, n for odd n)
        cz_layers = ansatz.entangler == Entangler::linear ? 2 : (n % 2 ? n : n - 1);
    }
    return 1 + ansatz.reps * (1 + cz_layers) + 1;
}

struct NoiseConfig {
    double p1 = 0.001;       // depolarizing probability per 1-qubit gate
    double p2 = 0.01;        // depolarizing probability per 2-qubit gate
    double p_readout = 0.02; // bit-flip probability per measured qubit
    std::size_t shots = 8192;
    std::uint64_t seed = 0;

    void validate() const {
        auto prob = [](double p) { return p >= 0.0 && p < 1.0; };
        if (!prob(p1) || !prob(p2) || !prob(p_readout))
            throw std::invalid_argument("noise: probabilities must be in [0,1)");
        if (shots < 1) throw std::invalid_argument("noise: shots must be >= 1");
    }
};

namespace detail {

enum class GateKind { H, RY, CZ, SDG };

struct Gate {
    GateKind kind;
    std::size_t q1 = 0;
    std::size_t q2 = 0;
    double angle = 0.0;
};

inline void append_ansatz_gates(std::vector<Gate>& gs, const AnsatzSpec& ansatz,
                                std::span<const double> theta) {
    const std::size_t n = ansatz.n_qubits;
    for (std::size_t q = 0; q < n; ++q) gs.push_back({GateKind::H, q});
    std::size_t p = 0;
    const auto pairs = ansatz.cz_pairs();
    for (std::size_t block = 0; block < ansatz.reps; ++block) {
        for (std::size_t q = 0; q < n; ++q) gs.push_back({GateKind::RY, q, 0, theta[p++]});
        for (const auto& [a, b] : pairs) gs.push_back({GateKind::CZ, a, b});
    }
    for (std::size_t q = 0; q < n; ++q) gs.push_back({GateKind::RY, q, 0, theta[p++]});
}

// Inverse circuit: gates reversed with negated rotation angles (H, CZ are
// self-inverse; SDG inverse not needed here).
inline void append_inverse_ansatz_gates(std::vector<Gate>& gs, const AnsatzSpec& ansatz,
                                        std::span<const double> theta) {
    std::vector<Gate> fwd;
    append_ansatz_gates(fwd, ansatz, theta);
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::RY) g.angle = -g.angle;
        gs.push_back(g);
    }
}

inline void apply_gate(std::vector<cplx>& amps, const Gate& g) {
    switch (g.kind) {
        case GateKind::H: gates::hadamard(amps, g.q1); break;
        case GateKind::RY: gates::ry(amps, g.q1, g.angle); break;
        case GateKind::CZ: gates::cz(amps, g.q1, g.q2); break;
        case GateKind::SDG: gates::sdg(amps, g.q1); break;
    }
}

// One depolarizing event: a uniformly random non-identity Pauli on the gate's
// qubit(s).  Draw order is fixed (one bernoulli per gate, then the Pauli
// choice), so trajectories are reproducible.
inline void run_trajectory(std::vector<cplx>& amps, const std::vector<Gate>& gs,
                           const NoiseConfig& noise, Rng& rng, bool& any_error) {
    any_error = false;
    for (const Gate& g : gs) {
        apply_gate(amps, g);
        if (g.kind == GateKind::CZ) {
            if (noise.p2 > 0.0 && rng.bernoulli(noise.p2)) {
                any_error = true;
                const int pick = int(rng.below(15)) + 1;  // 1..15, two base-4 digits
                const int pa = pick & 3, pb = (pick >> 2) & 3;
                if (pa) gates::pauli(amps, g.q1, pa);
                if (pb) gates::pauli(amps, g.q2, pb);
            }
        } else {
            if (noise.p1 > 0.0 && rng.bernoulli(noise.p1)) {
                any_error = true;
                gates::pauli(amps, g.q1, int(rng.below(3)) + 1);
            }
        }
    }
}

// Same draws as run_trajectory without touching a state; used to detect
// error-free shots cheaply so they can reuse the cached ideal distribution.
inline bool draw_error_events(const std::vector<Gate>& gs, const NoiseConfig& noise,
                              Rng& rng, std::vector<std::pair<std::size_t, int>>& events) {
    events.clear();
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        const bool two = gs[gi].kind == GateKind::CZ;
        const double p = two ? noise.p2 : noise.p1;
        if (p > 0.0 && rng.bernoulli(p)) {
            const int pick = two ? int(rng.below(15)) + 1 : int(rng.below(3)) + 1;
            events.emplace_back(gi, pick);
        }
    }
    return !events.empty();
}

inline void run_with_events(std::vector<cplx>& amps, const std::vector<Gate>& gs,
                            const std::vector<std::pair<std::size_t, int>>& events) {
    std::size_t e = 0;
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        apply_gate(amps, gs[gi]);
        if (e < events.size() && events[e].first == gi) {
            const int pick = events[e].second;
            if (gs[gi].kind == GateKind::CZ) {
                const int pa = pick & 3, pb = (pick >> 2) & 3;
                if (pa) gates::pauli(amps, gs[gi].q1, pa);
                if (pb) gates::pauli(amps, gs[gi].q2, pb);
            } else {
                gates::pauli(amps, gs[gi].q1, pick);
            }
            ++e;
        }
    }
}

inline std::vector<double> probabilities(const std::vector<cplx>& amps) {
    std::vector<double> p(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) p[i] = std::norm(amps[i]);
    return p;
}

inline std::size_t sample_bitstring(const std::vector<double>& probs, Rng& rng) {
    double u = rng.uniform();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        u -= probs[i];
        if (u < 0.0) return i;
    }
    return probs.size() - 1;
}

inline std::size_t flip_readout(std::size_t bits, std::size_t n_qubits, double p_readout,
                                Rng& rng) {
    for (std::size_t q = 0; q < n_qubits; ++q)
        if (p_readout > 0.0 && rng.bernoulli(p_readout)) bits ^= std::size_t(1) << q;
    return bits;
}

// Shot-sampled estimate of the parity observable defined by `support` after
// the given circuit.  stream distinguishes independent sampling contexts.
inline double sample_parity_mean(const std::vector<Gate>& gs, std::size_t n_qubits,
                                 std::uint64_t support, const NoiseConfig& noise,
                                 std::uint64_t stream) {
    const std::size_t dim = std::size_t(1) << n_qubits;
    std::vector<cplx> ideal(dim, cplx(0.0, 0.0));
    ideal[0] = 1.0;
    for (const Gate& g : gs) apply_gate(ideal, g);
    const std::vector<double> ideal_probs = probabilities(ideal);

    std::vector<cplx> work;
    std::vector<std::pair<std::size_t, int>> events;
    double acc = 0.0;
    for (std::size_t shot = 0; shot < noise.shots; ++shot) {
        Rng rng = Rng::keyed(noise.seed, stream, shot);
        std::size_t bits;
        if (draw_error_events(gs, noise, rng, events)) {
            work.assign(dim, cplx(0.0, 0.0));
            work[0] = 1.0;
            run_with_events(work, gs, events);
            bits = sample_bitstring(probabilities(work), rng);
        } else {
            bits = sample_bitstring(ideal_probs, rng);
        }
        bits = flip_readout(bits, n_qubits, noise.p_readout, rng);
        acc += (std::popcount(std::uint64_t(bits) & support) & 1) ? -1.0 : 1.0;
    }
    return acc / double(noise.shots);
}

}  // namespace detail

// Shot-sampled expectation of a Pauli sum under a depolarizing + readout
// noise model.  Per term, the circuit is rotated into the measurement basis
// (H for X, S-dagger then H for Y) and `shots` bitstrings are sampled;
// identity terms contribute their coefficient exactly.
inline double sampled_expectation(const AnsatzSpec& ansatz, std::span<const double> theta,
                                  const PauliSum& H, const NoiseConfig& noise) {
    ansatz.validate();
    noise.validate();
    if (theta.size() != ansatz.n_params())
        throw std::invalid_argument("sampled_expectation: wrong parameter count");
    const std::size_t n = ansatz.n_qubits;
    double total = 0.0;
    for (std::size_t ti = 0; ti < H.terms.size(); ++ti) {
        const PauliTerm& term = H.terms[ti];
        const PauliMask mask = make_mask(term.coeff, term.string);
        const std::uint64_t support = mask.xmask | mask.zmask;
        if (support == 0) {
            total += term.coeff;
            continue;
        }
        std::vector<detail::Gate> gs;
        detail::append_ansatz_gates(gs, ansatz, theta);
        for (std::size_t p = 0; p < term.string.size(); ++p) {
            const std::size_t q = n - 1 - p;
            if (term.string[p] == 'X') {
                gs.push_back({detail::GateKind::H, q});
            } else if (term.string[p] == 'Y') {
                gs.push_back({detail::GateKind::SDG, q});
                gs.push_back({detail::GateKind::H, q});
            }
        }
        total += term.coeff * detail::sample_parity_mean(gs, n, support, noise, ti);
    }
    return total;
}

// Compute-uncompute overlap estimate: probability of the all-zeros outcome
// after U(theta_b)^dagger U(theta_a) |0...0>, shot-sampled under the same
// noise model.  `stream` separates sampling contexts of different callers.
inline double sampled_zero_probability(const AnsatzSpec& ansatz,
                                       std::span<const double> theta_a,
                                       std::span<const double> theta_b,
                                       const NoiseConfig& noise, std::uint64_t stream = 0) {
    ansatz.validate();
    noise.validate();
    const std::size_t n = ansatz.n_qubits;
    const std::size_t dim = std::size_t(1) << n;
    std::vector<detail::Gate> gs;
    detail::append_ansatz_gates(gs, ansatz, theta_a);
    detail::append_inverse_ansatz_gates(gs, ansatz, theta_b);

    std::vector<cplx> ideal(dim, cplx(0.0, 0.0));
    ideal[0] = 1.0;
    for (const auto& g : gs) detail::apply_gate(ideal, g);
    const std::vector<double> ideal_probs = detail::probabilities(ideal);

    std::vector<cplx> work;
    std::vector<std::pair<std::size_t, int>> events;
    std::size_t zeros = 0;
    for (std::size_t shot = 0; shot < noise.shots; ++shot) {
        Rng rng = Rng::keyed(noise.seed, 0x5a5a5a5aULL + stream, shot);
        std::size_t bits;
        if (detail::draw_error_events(gs, noise, rng, events)) {
            work.assign(dim, cplx(0.0, 0.0));
            work[0] = 1.0;
            detail::run_with_events(work, gs, events);
            bits = detail::sample_bitstring(detail::probabilities(work), rng);
        } else {
            bits = detail::sample_bitstring(ideal_probs, rng);
        }
        bits = detail::flip_readout(bits, n, noise.p_readout, rng);
        if (bits == 0) ++zeros;
    }
    return double(zeros) / double(noise.shots);
}

}  // namespace huckelvq
