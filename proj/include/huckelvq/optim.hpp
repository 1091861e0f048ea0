#pragma once

// Classical optimizers for the variational loop.
//
// quasi_newton is a box-bounded L-BFGS with projected backtracking line
// search, the workhorse for noiseless objectives.  spsa is the
// noise-resistant choice.  cg and nelder_mead are included for the
// optimizer-comparison study; cg in particular degrades on deflated
// operators and is not a recommended default.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "huckelvq/core.hpp"

namespace huckelvq {

enum class OptimizerKind { quasi_newton, spsa, cg, nelder_mead };

enum class GradientMode { parameter_shift, finite_diff };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::quasi_newton;
    std::size_t max_evals = 10000;
    GradientMode gradient_mode = GradientMode::parameter_shift;
    double tolerance = 1e-8;  // gradient infinity-norm / simplex spread target
    std::uint64_t seed = 0;
    double lower_bound = -2.0 * kPi;
    double upper_bound = 2.0 * kPi;
    // SPSA gain schedule: a_k = a/(A+k+1)^alpha, c_k = c/(k+1)^gamma
    double spsa_a = 0.2;
    double spsa_c = 0.1;
    double spsa_A = -1.0;  // negative = auto (iterations / 10)
    double spsa_alpha = 0.602;
    double spsa_gamma = 0.101;

    void validate() const {
        if (max_evals < 1) throw std::invalid_argument("optimizer: max_evals must be >= 1");
        if (tolerance <= 0.0) throw std::invalid_argument("optimizer: tolerance must be > 0");
    }
};

struct OptimResult {
    std::vector<double> theta;
    double fval = 0.0;
    std::size_t n_evals = 0;
    bool converged = false;
    std::vector<std::pair<std::size_t, double>> trace;  // (iteration, value)
};

using Objective = std::function<double(const std::vector<double>&)>;

namespace detail {

// Counts evaluations, rejects non-finite values, and remembers the best
// point seen anywhere (optimizers return best-seen, never worse than theta0).
class Evaluator {
public:
    Evaluator(const Objective& f, std::size_t max_evals) : f_(f), max_evals_(max_evals) {}

    double operator()(const std::vector<double>& x) {
        const double v = probe(x);
        if (v < best_val_) {
            best_val_ = v;
            best_ = x;
        }
        return v;
    }

    // Evaluation that never becomes the returned point; gradient shifts may
    // step outside the box bounds and must not win the best-seen contract.
    double probe(const std::vector<double>& x) {
        ++n_evals_;
        const double v = f_(x);
        if (!std::isfinite(v)) {
            std::string msg = "objective returned non-finite value at theta = [";
            for (std::size_t i = 0; i < x.size(); ++i)
                msg += (i ? ", " : "") + std::to_string(x[i]);
            throw std::runtime_error(msg + "]");
        }
        return v;
    }

    bool exhausted() const { return n_evals_ >= max_evals_; }
    std::size_t n_evals() const { return n_evals_; }
    double best_val() const { return best_val_; }
    const std::vector<double>& best() const { return best_; }

private:
    const Objective& f_;
    std::size_t max_evals_;
    std::size_t n_evals_ = 0;
    double best_val_ = std::numeric_limits<double>::infinity();
    std::vector<double> best_;
};

inline std::vector<double> numeric_gradient(Evaluator& ev, const std::vector<double>& x,
                                            GradientMode mode) {
    const double shift = (mode == GradientMode::parameter_shift) ? kPi / 2.0 : 1e-6;
    const double denom = (mode == GradientMode::parameter_shift) ? 2.0 : 2e-6;
    std::vector<double> g(x.size());
    std::vector<double> xp = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        xp[i] = xi + shift;
        const double fp = ev.probe(xp);
        xp[i] = xi - shift;
        const double fm = ev.probe(xp);
        xp[i] = xi;
        g[i] = (fp - fm) / denom;
    }
    return g;
}

inline void clip(std::vector<double>& x, double lo, double hi) {
    for (double& xi : x) xi = std::clamp(xi, lo, hi);
}

// Gradient with outward components zeroed at active bounds.
inline double projected_grad_norm(const std::vector<double>& x, const std::vector<double>& g,
                                  double lo, double hi) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double gi = g[i];
        if ((x[i] <= lo && gi > 0.0) || (x[i] >= hi && gi < 0.0)) gi = 0.0;
        m = std::max(m, std::abs(gi));
    }
    return m;
}

inline OptimResult finish(Evaluator& ev, bool converged,
                          std::vector<std::pair<std::size_t, double>> trace) {
    OptimResult r;
    r.theta = ev.best();
    r.fval = ev.best_val();
    r.n_evals = ev.n_evals();
    r.converged = converged;
    r.trace = std::move(trace);
    return r;
}

inline OptimResult minimize_lbfgs(Evaluator& ev, std::vector<double> x,
                                  const OptimizerConfig& cfg) {
    const std::size_t d = x.size();
    const std::size_t memory = 10;
    clip(x, cfg.lower_bound, cfg.upper_bound);
    double fx = ev(x);
    std::vector<std::pair<std::size_t, double>> trace{{0, fx}};
    std::deque<std::pair<std::vector<double>, std::vector<double>>> hist;  // (s, y)
    std::vector<double> g = numeric_gradient(ev, x, cfg.gradient_mode);
    bool converged = false;
    for (std::size_t iter = 1; !ev.exhausted(); ++iter) {
        if (projected_grad_norm(x, g, cfg.lower_bound, cfg.upper_bound) <= cfg.tolerance) {
            converged = true;
            break;
        }
        // two-loop recursion
        std::vector<double> q = g;
        std::vector<double> alpha(hist.size());
        for (std::size_t h = hist.size(); h-- > 0;) {
            const auto& [s, y] = hist[h];
            double sy = 0.0, sq = 0.0;
            for (std::size_t i = 0; i < d; ++i) sy += s[i] * y[i];
            for (std::size_t i = 0; i < d; ++i) sq += s[i] * q[i];
            alpha[h] = sq / sy;
            for (std::size_t i = 0; i < d; ++i) q[i] -= alpha[h] * y[i];
        }
        if (!hist.empty()) {
            const auto& [s, y] = hist.back();
            double sy = 0.0, yy = 0.0;
            for (std::size_t i = 0; i < d; ++i) sy += s[i] * y[i];
            for (std::size_t i = 0; i < d; ++i) yy += y[i] * y[i];
            const double h0 = sy / yy;
            for (double& qi : q) qi *= h0;
        }
        for (std::size_t h = 0; h < hist.size(); ++h) {
            const auto& [s, y] = hist[h];
            double sy = 0.0, yq = 0.0;
            for (std::size_t i = 0; i < d; ++i) sy += s[i] * y[i];
            for (std::size_t i = 0; i < d; ++i) yq += y[i] * q[i];
            const double beta = yq / sy;
            for (std::size_t i = 0; i < d; ++i) q[i] += (alpha[h] - beta) * s[i];
        }
        std::vector<double> dir(d);
        double gd = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            dir[i] = -q[i];
            gd += g[i] * dir[i];
        }
        if (gd >= 0.0) {  // not a descent direction, fall back to steepest descent
            for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
            hist.clear();
        }
        // projected backtracking line search with Armijo condition; on
        // failure fall back to steepest descent once before giving up
        std::vector<double> xn(d);
        double fn = fx;
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1) {
                for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
                hist.clear();
            }
            double step = 1.0;
            for (int ls = 0; ls < 40 && !ev.exhausted(); ++ls) {
                for (std::size_t i = 0; i < d; ++i) xn[i] = x[i] + step * dir[i];
                clip(xn, cfg.lower_bound, cfg.upper_bound);
                fn = ev(xn);
                double gdx = 0.0;  // directional derivative along the projected step
                for (std::size_t i = 0; i < d; ++i) gdx += g[i] * (xn[i] - x[i]);
                if (fn <= fx + 1e-4 * gdx && gdx < 0.0) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
        }
        if (!accepted) {
            converged = true;  // no further decrease along the search direction
            break;
        }
        std::vector<double> gn = numeric_gradient(ev, xn, cfg.gradient_mode);
        std::vector<double> s(d), y(d);
        double sy = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
            sy += s[i] * y[i];
        }
        if (sy > 1e-12) {
            hist.emplace_back(std::move(s), std::move(y));
            if (hist.size() > memory) hist.pop_front();
        }
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
        trace.emplace_back(iter, fx);
    }
    return finish(ev, converged, std::move(trace));
}

inline OptimResult minimize_spsa(Evaluator& ev, std::vector<double> x,
                                 const OptimizerConfig& cfg) {
    const std::size_t d = x.size();
    clip(x, cfg.lower_bound, cfg.upper_bound);
    std::vector<std::pair<std::size_t, double>> trace;
    Rng rng = Rng::keyed(cfg.seed, 0x53505341ULL);  // "SPSA"
    const std::size_t iters = std::max<std::size_t>(1, (cfg.max_evals - 1) / 2);
    const double A = cfg.spsa_A >= 0.0 ? cfg.spsa_A : double(iters) / 10.0;
    ev(x);  // anchor: never return worse than theta0
    std::vector<double> delta(d), xp(d), xm(d);
    for (std::size_t k = 0; k < iters && !ev.exhausted(); ++k) {
        const double ak = cfg.spsa_a / std::pow(A + double(k) + 1.0, cfg.spsa_alpha);
        const double ck = cfg.spsa_c / std::pow(double(k) + 1.0, cfg.spsa_gamma);
        for (std::size_t i = 0; i < d; ++i) delta[i] = rng.sign();
        for (std::size_t i = 0; i < d; ++i) {
            xp[i] = std::clamp(x[i] + ck * delta[i], cfg.lower_bound, cfg.upper_bound);
            xm[i] = std::clamp(x[i] - ck * delta[i], cfg.lower_bound, cfg.upper_bound);
        }
        const double fp = ev(xp);
        if (ev.exhausted() && k + 1 < iters) break;
        const double fm = ev(xm);
        const double gfac = (fp - fm) / (2.0 * ck);
        for (std::size_t i = 0; i < d; ++i)
            x[i] = std::clamp(x[i] - ak * gfac * delta[i], cfg.lower_bound, cfg.upper_bound);
        trace.emplace_back(k, std::min(fp, fm));
    }
    return finish(ev, true, std::move(trace));
}

inline OptimResult minimize_cg(Evaluator& ev, std::vector<double> x,
                               const OptimizerConfig& cfg) {
    const std::size_t d = x.size();
    clip(x, cfg.lower_bound, cfg.upper_bound);
    double fx = ev(x);
    std::vector<std::pair<std::size_t, double>> trace{{0, fx}};
    std::vector<double> g = numeric_gradient(ev, x, cfg.gradient_mode);
    std::vector<double> dir(d);
    for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
    bool converged = false;
    for (std::size_t iter = 1; !ev.exhausted(); ++iter) {
        if (projected_grad_norm(x, g, cfg.lower_bound, cfg.upper_bound) <= cfg.tolerance) {
            converged = true;
            break;
        }
        double gd = 0.0;
        for (std::size_t i = 0; i < d; ++i) gd += g[i] * dir[i];
        if (gd >= 0.0) {
            for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
        }
        double step = 1.0;
        std::vector<double> xn(d);
        double fn = fx;
        bool accepted = false;
        for (int ls = 0; ls < 40 && !ev.exhausted(); ++ls) {
            for (std::size_t i = 0; i < d; ++i) xn[i] = x[i] + step * dir[i];
            clip(xn, cfg.lower_bound, cfg.upper_bound);
            fn = ev(xn);
            if (fn < fx) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            converged = true;
            break;
        }
        std::vector<double> gn = numeric_gradient(ev, xn, cfg.gradient_mode);
        // Polak-Ribiere with reset on negative beta
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            num += gn[i] * (gn[i] - g[i]);
            den += g[i] * g[i];
        }
        const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
        for (std::size_t i = 0; i < d; ++i) dir[i] = -gn[i] + beta * dir[i];
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
        trace.emplace_back(iter, fx);
    }
    return finish(ev, converged, std::move(trace));
}

inline OptimResult minimize_nelder_mead(Evaluator& ev, std::vector<double> x,
                                        const OptimizerConfig& cfg) {
    const std::size_t d = x.size();
    clip(x, cfg.lower_bound, cfg.upper_bound);
    std::vector<std::vector<double>> pts(d + 1, x);
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i < d; ++i)
        pts[i + 1][i] = std::clamp(pts[i + 1][i] + 0.25, cfg.lower_bound, cfg.upper_bound);
    for (std::size_t i = 0; i <= d; ++i) fv[i] = ev(pts[i]);
    std::vector<std::pair<std::size_t, double>> trace;
    bool converged = false;
    auto order = [&]() {
        std::vector<std::size_t> idx(d + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> p2(d + 1);
        std::vector<double> f2(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            p2[i] = pts[idx[i]];
            f2[i] = fv[idx[i]];
        }
        pts = std::move(p2);
        fv = std::move(f2);
    };
    for (std::size_t iter = 0; !ev.exhausted(); ++iter) {
        order();
        trace.emplace_back(iter, fv[0]);
        if (fv[d] - fv[0] < cfg.tolerance) {
            converged = true;
            break;
        }
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k] / double(d);
        auto make = [&](double coef) {
            std::vector<double> p(d);
            for (std::size_t k = 0; k < d; ++k)
                p[k] = std::clamp(centroid[k] + coef * (pts[d][k] - centroid[k]),
                                  cfg.lower_bound, cfg.upper_bound);
            return p;
        };
        std::vector<double> xr = make(-1.0);
        const double fr = ev(xr);
        if (fr < fv[0]) {
            std::vector<double> xe = make(-2.0);
            const double fe = ev(xe);
            if (fe < fr) {
                pts[d] = std::move(xe);
                fv[d] = fe;
            } else {
                pts[d] = std::move(xr);
                fv[d] = fr;
            }
        } else if (fr < fv[d - 1]) {
            pts[d] = std::move(xr);
            fv[d] = fr;
        } else {
            std::vector<double> xc = make(fr < fv[d] ? -0.5 : 0.5);
            const double fc = ev(xc);
            if (fc < std::min(fr, fv[d])) {
                pts[d] = std::move(xc);
                fv[d] = fc;
            } else {  // shrink toward the best vertex
                for (std::size_t i = 1; i <= d && !ev.exhausted(); ++i) {
                    for (std::size_t k = 0; k < d; ++k)
                        pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
                    fv[i] = ev(pts[i]);
                }
            }
        }
    }
    return finish(ev, converged, std::move(trace));
}

}  // namespace detail

// Gradient of an objective.  parameter_shift uses +-pi/2 shifts, exact for
// expectation objectives generated by RY rotations; finite_diff uses central
// differences with step 1e-6.
inline std::vector<double> gradient(const Objective& f, const std::vector<double>& theta,
                                    GradientMode mode) {
    detail::Evaluator ev(f, std::numeric_limits<std::size_t>::max());
    return detail::numeric_gradient(ev, theta, mode);
}

// Minimizes the objective from theta0 and returns the best point seen.
// Deterministic given (seed, config, objective).
inline OptimResult minimize(const Objective& f, std::vector<double> theta0,
                            const OptimizerConfig& cfg) {
    cfg.validate();
    detail::Evaluator ev(f, cfg.max_evals);
    switch (cfg.kind) {
        case OptimizerKind::quasi_newton: return detail::minimize_lbfgs(ev, std::move(theta0), cfg);
        case OptimizerKind::spsa: return detail::minimize_spsa(ev, std::move(theta0), cfg);
        case OptimizerKind::cg: return detail::minimize_cg(ev, std::move(theta0), cfg);
        case OptimizerKind::nelder_mead:
            return detail::minimize_nelder_mead(ev, std::move(theta0), cfg);
    }
    throw std::logic_error("minimize: unknown optimizer kind");
}

}  // namespace huckelvq
