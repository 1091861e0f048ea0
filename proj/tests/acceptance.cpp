// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.  Each check pins the published value and tolerance it
// reproduces; failures print the observed numbers.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "huckelvq/huckelvq.hpp"

using namespace huckelvq;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s: criterion %d (%s)%s%s\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

struct Prepared {
    HuckelMatrix conn;
    HuckelMatrix solver;
    PauliSum H;  // solver sign
};

Prepared prep(const std::string& name) {
    Prepared p;
    p.conn = pad_to_qubits(build_huckel(*lookup_molecule(name)));
    p.solver = to_solver_sign(p.conn);
    p.H = frobenius_decompose(p.solver);
    return p;
}

SolveConfig ideal_config(std::size_t n_qubits, std::uint64_t seed) {
    SolveConfig cfg;
    cfg.ansatz.n_qubits = n_qubits;
    cfg.ansatz.reps = default_reps(n_qubits);
    cfg.optimizer.max_evals = 20000;
    cfg.restarts = 8;
    cfg.seed = seed;
    return cfg;
}

std::vector<double> oracle_physical(const HuckelMatrix& solver_mat) {
    const EigenSystem e = eig_sym(solver_mat.entries);
    std::vector<double> out;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        double w = 0.0;
        for (std::size_t d : solver_mat.dummy_indices)
            w += e.vectors[i][d] * e.vectors[i][d];
        if (w <= 0.5) out.push_back(e.values[i]);
    }
    return out;
}

std::vector<double> physical_energies(const SpectrumResult& r) {
    std::vector<double> out;
    for (const Level& lv : r.levels)
        if (!lv.spurious) out.push_back(lv.energy);
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const std::map<std::string, std::map<std::string, double>> kTableI = {
    {"C2H4", {{"X", 1.0}}},
    {"C3H4",
     {{"IX", 0.5}, {"XI", 0.5}, {"XX", 0.5}, {"XZ", 0.5}, {"YY", 0.5}, {"ZX", 0.5}}},
    {"C4H4", {{"IX", 1.0}, {"XX", 1.0}}},
    {"C4H6", {{"IX", 1.0}, {"XX", 0.5}, {"YY", 0.5}}},
    {"C3H4O",
     {{"II", 0.25}, {"IX", 1.1}, {"IZ", -0.25}, {"XX", 0.45}, {"YY", 0.45}, {"ZI", -0.25},
      {"ZZ", 0.25}}},
    {"C4H4O",
     {{"III", 0.25},  {"IIX", 0.425},  {"IIZ", 0.25},  {"IXX", 0.275}, {"IYY", 0.275},
      {"IZI", 0.25},  {"IZZ", 0.25},   {"IZX", -0.025}, {"XII", 0.20}, {"XIZ", 0.20},
      {"XXX", 0.275}, {"XYY", -0.275}, {"XZI", 0.20},  {"XZZ", 0.20},  {"YXY", 0.275},
      {"YYX", 0.275}, {"ZII", 0.25},   {"ZIX", 0.425}, {"ZIZ", 0.25},  {"ZXX", 0.275},
      {"ZYY", 0.275}, {"ZZI", 0.25},   {"ZZX", -0.025}, {"ZZZ", 0.25}}},
    {"C6H6",
     {{"IIX", 0.75}, {"IXX", 0.25},  {"IYY", 0.25}, {"IZX", 0.25},  {"XIX", 0.25},
      {"XXX", 0.25}, {"XYY", -0.25}, {"XZX", 0.25}, {"YIY", -0.25}, {"YXY", 0.25},
      {"YYX", 0.25}, {"YZY", -0.25}, {"ZIX", 0.25}, {"ZXX", 0.25},  {"ZYY", 0.25},
      {"ZZX", -0.25}}},
    {"C8H10",
     {{"IIX", 1.0}, {"IXX", 0.5}, {"IYY", 0.5}, {"XXX", 0.25}, {"XYY", -0.25},
      {"YXY", 0.25}, {"YYX", 0.25}}},
};

const std::map<std::string, std::vector<double>> kTableIIExact = {
    {"C2H4", {-1.0, 1.0}},
    {"C3H4", {-2.0, 1.0, 1.0}},
    {"C4H4", {-2.0, 0.0, 0.0, 2.0}},
    {"C4H6", {-1.6180, -0.6180, 0.6180, 1.6180}},
    {"C3H4O", {-1.9275, -1.0738, 0.4583, 1.5430}},
    {"C4H4O", {-2.6524, -1.2908, -0.7384, 1.0432, 1.6384}},
    {"C6H6", {-2.0, -1.0, -1.0, 1.0, 1.0, 2.0}},
    {"C8H10", {-1.8793, -1.5320, -0.9999, -0.3472, 0.3472, 0.9999, 1.5320, 1.8793}},
};

// The paper's Ideal rows: identical to Exact except C8H10.
const std::map<std::string, std::vector<double>> kTableIIIdeal = {
    {"C2H4", {-1.0, 1.0}},
    {"C3H4", {-2.0, 1.0, 1.0}},
    {"C4H4", {-2.0, 0.0, 0.0, 2.0}},
    {"C4H6", {-1.6180, -0.6180, 0.6180, 1.6180}},
    {"C3H4O", {-1.9275, -1.0738, 0.4583, 1.5430}},
    {"C4H4O", {-2.6524, -1.2908, -0.7384, 1.0432, 1.6384}},
    {"C6H6", {-2.0, -1.0, -1.0, 1.0, 1.0, 2.0}},
    {"C8H10", {-1.8794, -1.5356, -1.0160, -0.3604, 0.3404, 1.0, 1.5321, 1.8794}},
};

void criterion1_table_i() {
    std::string detail;
    bool ok = true;
    for (const auto& [name, expect] : kTableI) {
        const PauliSum sum = frobenius_decompose(prep(name).conn);
        std::map<std::string, double> got;
        for (const PauliTerm& t : sum.terms) got[t.string] = t.coeff;
        for (const auto& [str, coeff] : expect) {
            if (!got.count(str) || std::abs(got[str] - coeff) > 1e-10) {
                ok = false;
                detail += name + " term " + str + " wrong; ";
            }
        }
        for (const auto& [str, coeff] : got)
            if (!expect.count(str)) {
                ok = false;
                detail += name + " extra term " + str + "; ";
            }
    }
    report(1, "operator table reproduction", ok, detail);
}

void criterion2_table_ii_exact() {
    std::string detail;
    bool ok = true;
    for (const auto& [name, expect] : kTableIIExact) {
        const Prepared p = prep(name);
        const std::vector<double> physical = oracle_physical(p.solver);
        if (physical.size() != expect.size()) {
            ok = false;
            detail += name + " level count; ";
            continue;
        }
        for (std::size_t i = 0; i < expect.size(); ++i)
            // the printed rows carry 4 decimals (and one 0.9999 rounding artifact)
            if (std::abs(physical[i] - expect[i]) > 1e-4 + 1e-9) {
                ok = false;
                char buf[120];
                std::snprintf(buf, sizeof buf, "%s level %zu: %.6f vs %.4f; ",
                              name.c_str(), i, physical[i], expect[i]);
                detail += buf;
            }
    }
    report(2, "exact spectrum reproduction", ok, detail);
}

void criterion3_table_ii_ideal() {
    std::string detail;
    bool ok = true;
    for (const auto& [name, expect] : kTableIIIdeal) {
        const Prepared p = prep(name);
        const double tol = p.H.n_qubits <= 2 ? 0.02 : 0.05;
        std::vector<std::vector<double>> runs;  // per seed, physical energies
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const SpectrumResult r =
                vqd_spectrum(p.H, std::size_t(1) << p.H.n_qubits,
                             ideal_config(p.H.n_qubits, seed), p.solver.dummy_indices);
            if (!r.complete) continue;
            const std::vector<double> phys = physical_energies(r);
            if (phys.size() == expect.size()) runs.push_back(phys);
        }
        if (runs.size() < 3) {
            ok = false;
            detail += name + " too few complete runs; ";
            continue;
        }
        for (std::size_t i = 0; i < expect.size(); ++i) {
            std::vector<double> vals;
            for (const auto& run : runs) vals.push_back(run[i]);
            const double med = median(vals);
            if (std::abs(med - expect[i]) > tol) {
                ok = false;
                char buf[120];
                std::snprintf(buf, sizeof buf, "%s level %zu: median %.4f vs %.4f; ",
                              name.c_str(), i, med, expect[i]);
                detail += buf;
            }
        }
    }
    report(3, "ideal VQD spectrum reproduction", ok, detail);
}

void criterion4_table_iii() {
    // published (energy, coefficients); degenerate C4H4 zero levels are
    // compared by subspace overlap only
    struct Row {
        const char* molecule;
        double energy;
        std::vector<double> coeffs;  // empty = degenerate, overlap check only
    };
    const std::vector<Row> rows = {
        {"C2H4", -1.0, {0.7071, 0.7071}},
        {"C2H4", 1.0, {-0.7071, 0.7071}},
        {"C4H4", -2.0, {0.5, 0.5, 0.5, 0.5}},
        {"C4H4", 0.0, {}},
        {"C4H4", 0.0, {}},
        {"C4H4", 2.0, {-0.5, 0.5, -0.5, 0.5}},
        {"C4H6", -1.6180, {0.3717, 0.6015, 0.6015, 0.3717}},
        {"C4H6", -0.6180, {-0.6015, -0.3717, 0.3717, 0.6015}},
        {"C4H6", 0.6180, {0.6015, -0.3717, -0.3717, 0.6015}},
        {"C4H6", 1.6180, {0.3717, -0.6015, 0.6015, -0.3717}},
    };

    std::map<std::string, SpectrumResult> solved;
    std::map<std::string, EigenSystem> eigs;
    std::map<std::string, std::size_t> next_level;
    for (const char* name : {"C2H4", "C4H4", "C4H6"}) {
        const Prepared p = prep(name);
        solved[name] = vqd_spectrum(p.H, std::size_t(1) << p.H.n_qubits,
                                    ideal_config(p.H.n_qubits, 1), p.solver.dummy_indices);
        eigs[name] = eig_sym(p.solver.entries);
    }

    std::string detail;
    bool ok = true;
    for (const Row& row : rows) {
        const std::size_t idx = next_level[row.molecule]++;
        const SpectrumResult& r = solved[row.molecule];
        if (!r.complete || idx >= r.levels.size()) {
            ok = false;
            detail += std::string(row.molecule) + " incomplete; ";
            continue;
        }
        const Level& lv = r.levels[idx];
        const double ov = subspace_overlap(lv.eigvec, eigs[row.molecule], row.energy, 1e-3);
        if (ov < 0.99) {
            ok = false;
            char buf[120];
            std::snprintf(buf, sizeof buf, "%s E=%.4f overlap %.4f; ", row.molecule,
                          row.energy, ov);
            detail += buf;
        }
        if (!row.coeffs.empty()) {
            // non-degenerate: match coefficients up to a global sign
            double err_plus = 0.0, err_minus = 0.0;
            for (std::size_t k = 0; k < row.coeffs.size(); ++k) {
                err_plus = std::max(err_plus, std::abs(lv.eigvec[k] - row.coeffs[k]));
                err_minus = std::max(err_minus, std::abs(lv.eigvec[k] + row.coeffs[k]));
            }
            if (std::min(err_plus, err_minus) > 1e-2) {
                ok = false;
                char buf[120];
                std::snprintf(buf, sizeof buf, "%s E=%.4f coeff err %.4f; ", row.molecule,
                              row.energy, std::min(err_plus, err_minus));
                detail += buf;
            }
        }
    }
    report(4, "orbital coefficient reproduction", ok, detail);
}

void criterion5_c60() {
    const auto t0 = std::chrono::steady_clock::now();
    const Prepared p = prep("C60");
    std::string detail;
    bool ok = true;

    if (p.H.terms.size() != 680) {
        ok = false;
        detail += "pauli_terms=" + std::to_string(p.H.terms.size()) + " (want 680); ";
    }
    if (p.solver.dummy_indices.size() != 4) {
        ok = false;
        detail += "spurious=" + std::to_string(p.solver.dummy_indices.size()) + "; ";
    }

    SolveConfig cfg = ideal_config(6, 1);
    cfg.ansatz.reps = 9;
    // Budget chosen so deflation error is visible but bounded: plain VQD
    // accumulates roughly twice the symVQD error here, mirroring the
    // published comparison, while symVQD stays well under the 0.06 target.
    cfg.restarts = 3;
    cfg.optimizer.max_evals = 4000;

    const EigenSystem exact = eig_sym(p.solver.entries);
    auto run_err = [&](bool sym) {
        const SpectrumResult r = sym ? symvqd_spectrum(p.H, cfg, p.solver.dummy_indices)
                                     : vqd_spectrum(p.H, 64, cfg, p.solver.dummy_indices);
        if (!r.complete) return -1.0;
        std::vector<double> energies;
        for (const Level& lv : r.levels) energies.push_back(lv.energy);
        return avg_error(energies, exact.values).mean_abs_error;
    };
    const double err_vqd = run_err(false);
    const double err_sym = run_err(true);
    char buf[200];
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
    std::snprintf(buf, sizeof buf,
                  "vqd mean abs %.4f, symvqd mean abs %.4f (target: symvqd <= 0.06 and < "
                  "vqd), %.0f s",
                  err_vqd, err_sym, secs);
    detail += buf;
    if (err_vqd < 0.0 || err_sym < 0.0) ok = false;
    if (!(err_sym <= 0.06)) ok = false;
    if (!(err_sym < err_vqd)) ok = false;
    report(5, "C60 benchmark", ok, detail);
}

void criterion6_decomposition_equivalence() {
    std::string detail;
    bool ok = true;
    for (const char* name : {"C2H4", "C3H4", "C4H4", "C4H6", "C3H4O"}) {
        const Prepared p = prep(name);
        const PauliSum frob = frobenius_decompose(p.conn);
        const PauliSum fit = fit_decompose(p.conn);
        std::map<std::string, double> fm;
        for (const PauliTerm& t : fit.terms) fm[t.string] = t.coeff;
        for (const PauliTerm& t : frob.terms)
            if (!fm.count(t.string) || std::abs(fm[t.string] - t.coeff) > 1e-3) {
                ok = false;
                detail += std::string(name) + " " + t.string + "; ";
            }
    }
    Rng rng = Rng::keyed(606);
    for (int trial = 0; trial < 100; ++trial) {
        HuckelMatrix H;
        H.entries = Matrix(8);
        H.n_real = 8;
        H.padded = true;
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = i; j < 8; ++j)
                H.entries(i, j) = H.entries(j, i) = rng.uniform(-1.0, 1.0);
        const Matrix back = reconstruct(frobenius_decompose(H));
        if (back.max_abs_diff(H.entries) > 1e-10) {
            ok = false;
            detail += "roundtrip trial " + std::to_string(trial) + "; ";
        }
    }
    report(6, "decomposition equivalence and roundtrip", ok, detail);
}

void criterion7_gradient_check() {
    const char* molecules[4] = {"C2H4", "C4H6", "C3H4O", "C6H6"};
    std::string detail;
    bool ok = true;
    Rng rng = Rng::keyed(707);
    for (int pair = 0; pair < 20; ++pair) {
        const Prepared p = prep(molecules[pair % 4]);
        AnsatzSpec a{p.H.n_qubits, default_reps(p.H.n_qubits)};
        const std::vector<PauliMask> masks = compile_masks(p.H);
        const Objective f = [&](const std::vector<double>& theta) {
            return expectation(prepare(a, theta), masks);
        };
        std::vector<double> theta(a.n_params());
        for (double& t : theta) t = rng.uniform(-kPi, kPi);
        const std::vector<double> ps = gradient(f, theta, GradientMode::parameter_shift);
        const std::vector<double> fd = gradient(f, theta, GradientMode::finite_diff);
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (std::abs(ps[i] - fd[i]) > 1e-5) {
                ok = false;
                char buf[120];
                std::snprintf(buf, sizeof buf, "pair %d coord %zu diff %.2e; ", pair, i,
                              std::abs(ps[i] - fd[i]));
                detail += buf;
            }
    }
    report(7, "parameter-shift gradient check", ok, detail);
}

void criterion8_noisy_sanity() {
    std::string detail;
    bool ok = true;
    for (const char* name : {"C2H4", "C3H4", "C4H4", "C4H6", "C3H4O"}) {
        const Prepared p = prep(name);
        const std::vector<double> exact = oracle_physical(p.solver);
        std::vector<std::vector<double>> abs_errors(exact.size());
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            SolveConfig cfg = ideal_config(p.H.n_qubits, seed);
            cfg.mode = SolveMode::noisy;
            cfg.optimizer.kind = OptimizerKind::spsa;
            cfg.optimizer.max_evals = 800;
            cfg.restarts = 2;
            const SpectrumResult r =
                vqd_spectrum(p.H, std::size_t(1) << p.H.n_qubits, cfg,
                             p.solver.dummy_indices);
            if (!r.complete) continue;
            const std::vector<double> phys = physical_energies(r);
            if (phys.size() != exact.size()) continue;
            for (std::size_t i = 0; i < exact.size(); ++i)
                abs_errors[i].push_back(std::abs(phys[i] - exact[i]));
        }
        for (std::size_t i = 0; i < exact.size(); ++i) {
            if (abs_errors[i].size() < 2) {
                ok = false;
                detail += std::string(name) + " too few runs; ";
                break;
            }
            const double med = median(abs_errors[i]);
            if (med > 0.1) {
                ok = false;
                char buf[120];
                std::snprintf(buf, sizeof buf, "%s level %zu median err %.4f; ", name, i,
                              med);
                detail += buf;
            }
        }
    }
    report(8, "noisy-setting sanity", ok, detail);
}

void criterion9_deflation_invariants() {
    std::string detail;
    bool ok = true;
    for (const char* name : {"C2H4", "C3H4", "C4H4", "C4H6", "C3H4O", "C4H4O", "C6H6",
                             "C8H10"}) {
        const Prepared p = prep(name);
        const std::size_t dim = std::size_t(1) << p.H.n_qubits;
        const SpectrumResult r = vqd_spectrum(p.H, dim, ideal_config(p.H.n_qubits, 2),
                                              p.solver.dummy_indices);
        if (!r.complete) {
            ok = false;
            detail += std::string(name) + " incomplete; ";
            continue;
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if (i && r.levels[i].energy < r.levels[i - 1].energy - 1e-6) {
                ok = false;
                detail += std::string(name) + " ordering; ";
            }
            for (std::size_t j = i + 1; j < dim; ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < dim; ++k)
                    dot += r.levels[i].eigvec[k] * r.levels[j].eigvec[k];
                if (dot * dot > 0.02) {
                    ok = false;
                    char buf[120];
                    std::snprintf(buf, sizeof buf, "%s overlap(%zu,%zu)=%.4f; ", name, i,
                                  j, dot * dot);
                    detail += buf;
                }
            }
        }
    }
    report(9, "deflation invariants", ok, detail);
}

}  // namespace

int main() {
    criterion1_table_i();
    criterion2_table_ii_exact();
    criterion3_table_ii_ideal();
    criterion4_table_iii();
    criterion6_decomposition_equivalence();
    criterion7_gradient_check();
    criterion9_deflation_invariants();
    criterion8_noisy_sanity();
    criterion5_c60();
    if (g_failures) {
        std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("ACCEPTANCE: all 9 criteria passed\n");
    return 0;
}
