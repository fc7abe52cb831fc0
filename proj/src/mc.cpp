#include "eigengrad/mc.hpp"

#include "eigengrad/bounds.hpp"
#include "eigengrad/errors.hpp"
#include "eigengrad/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace eigengrad {

namespace {

// Runs the worker over fixed path chunks and combines the per-chunk
// accumulators in chunk order, so totals are bit-identical for any thread
// count. Each path owns its own RNG stream, so the chunking itself does not
// influence the draws.
void run_chunked(long n_paths, const MCConfig& cfg, int acc_len,
                 const std::function<void(long, long, std::vector<double>&)>& worker,
                 std::vector<double>& total) {
    const int nc = std::max(1, cfg.n_chunks);
    std::vector<std::vector<double>> partials(nc, std::vector<double>(acc_len, 0.0));
    int nt = cfg.n_threads > 0
                 ? cfg.n_threads
                 : static_cast<int>(std::thread::hardware_concurrency());
    nt = std::max(1, std::min(nt, nc));
    std::atomic<int> next{0};
    auto drain = [&]() {
        for (;;) {
            const int c = next.fetch_add(1);
            if (c >= nc) break;
            const long p0 = n_paths * static_cast<long>(c) / nc;
            const long p1 = n_paths * static_cast<long>(c + 1) / nc;
            worker(p0, p1, partials[c]);
        }
    };
    if (nt == 1) {
        drain();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(nt);
        for (int i = 0; i < nt; ++i) threads.emplace_back(drain);
        for (auto& th : threads) th.join();
    }
    total.assign(acc_len, 0.0);
    for (const auto& p : partials)
        for (int i = 0; i < acc_len; ++i) total[i] += p[i];
}

double binomial_stderr(double p, long n) {
    const double v = std::max(p * (1.0 - p), 0.0) / static_cast<double>(n);
    const double se = std::sqrt(v);
    return se > 0.0 ? se : 1.0 / static_cast<double>(n);
}

struct CheckpointStats {
    double mean, std_error;
};

// Kills the diffusion generated by L/2 at the domain boundary and evaluates
// `value` (a function of the interval coordinate / ball radius) at each
// checkpoint step; dead paths contribute zero. Returns mean and standard
// error per checkpoint over all n_paths.
std::vector<CheckpointStats> run_killed_paths(
    const Domain& dom, double x0, double dt,
    const std::vector<long>& checkpoint_steps,
    const std::function<double(double)>& value, const MCConfig& cfg,
    std::uint64_t seed) {
    const DomainSpec& spec = dom.spec;
    const std::size_t n_cp = checkpoint_steps.size();
    const long max_step = checkpoint_steps.back();
    const double sq = std::sqrt(dt);
    const bool bridge = cfg.bridge_correction;

    // precomputed drift V'/2 on the grid (intervals only)
    std::vector<double> half_drift;
    if (spec.kind == DomainKind::Interval && !spec.drift_potential.empty()) {
        const auto& V = spec.drift_potential;
        const double h = spec.spacing();
        half_drift.resize(V.size());
        half_drift[0] = 0.5 * (V[1] - V[0]) / h;
        for (std::size_t i = 1; i + 1 < V.size(); ++i)
            half_drift[i] = 0.25 * (V[i + 1] - V[i - 1]) / h;
        half_drift.back() = 0.5 * (V.back() - V[V.size() - 2]) / h;
    }

    auto worker = [&](long p0, long p1, std::vector<double>& acc) {
        const double L = spec.length;
        const double R = spec.radius;
        const int d = spec.dim;
        std::vector<double> X(spec.kind == DomainKind::Ball ? d : 0);
        for (long p = p0; p < p1; ++p) {
            Philox4x32 rng(seed, static_cast<std::uint64_t>(p));
            bool alive = true;
            double x = x0;
            double rho = spec.kind == DomainKind::Ball ? R - x0
                                                       : std::min(x0, L - x0);
            if (spec.kind == DomainKind::Ball) {
                std::fill(X.begin(), X.end(), 0.0);
                X[0] = x0;
            }
            std::size_t ci = 0;
            for (long step = 0;; ++step) {
                while (ci < n_cp && checkpoint_steps[ci] == step) {
                    if (alive) {
                        const double v = value(x);
                        acc[2 * ci] += v;
                        acc[2 * ci + 1] += v * v;
                    }
                    ++ci;
                }
                if (ci == n_cp || !alive || step == max_step) break;
                if (spec.kind == DomainKind::Interval) {
                    double drift = 0.0;
                    if (!half_drift.empty())
                        drift = interp_grid(spec.grid, half_drift, x);
                    const double x1 = x + drift * dt + sq * rng.normal();
                    if (x1 <= 0.0 || x1 >= L) {
                        alive = false;
                    } else if (bridge) {
                        const double pl = std::exp(-2.0 * x * x1 / dt);
                        const double pr =
                            std::exp(-2.0 * (L - x) * (L - x1) / dt);
                        const double pc = pl + pr - pl * pr;
                        if (rng.uniform() < pc) alive = false;
                    }
                    x = x1;
                } else {
                    for (int j = 0; j < d; ++j) X[j] += sq * rng.normal();
                    double r2 = 0.0;
                    for (int j = 0; j < d; ++j) r2 += X[j] * X[j];
                    const double r = std::sqrt(r2);
                    const double rho1 = R - r;
                    if (rho1 <= 0.0) {
                        alive = false;
                    } else if (bridge) {
                        if (rng.uniform() < std::exp(-2.0 * rho * rho1 / dt))
                            alive = false;
                    }
                    rho = rho1;
                    x = r;
                }
            }
        }
    };

    std::vector<double> total;
    run_chunked(cfg.n_paths, cfg, static_cast<int>(2 * n_cp), worker, total);

    std::vector<CheckpointStats> out(n_cp);
    const double n = static_cast<double>(cfg.n_paths);
    for (std::size_t c = 0; c < n_cp; ++c) {
        const double mean = total[2 * c] / n;
        const double var = std::max(total[2 * c + 1] / n - mean * mean, 0.0);
        out[c] = {mean, std::sqrt(var / n)};
    }
    return out;
}

} // namespace

double MCConfig::step_for(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("MCConfig: horizon must be > 0");
    const double step = dt > 0.0 ? dt : t / 2000.0;
    if (step > t / 100.0 * (1.0 + 1e-12))
        throw std::invalid_argument("MCConfig: dt must be <= horizon/100");
    return step;
}

FptResult simulate_fpt(double alpha, double eps, double t, const MCConfig& cfg) {
    if (!(eps > 0.0) || !(t > 0.0))
        throw std::invalid_argument("simulate_fpt: eps and t must be > 0");
    if (cfg.n_paths < 1) throw std::invalid_argument("simulate_fpt: n_paths >= 1");
    const long n_steps = std::max(1l, std::lround(t / cfg.step_for(t)));
    const double dt = t / static_cast<double>(n_steps);
    const double sq = std::sqrt(dt);
    const double drift = alpha * dt;
    const bool bridge = cfg.bridge_correction;
    const std::uint64_t seed = cfg.seed;

    auto worker = [&](long p0, long p1, std::vector<double>& acc) {
        long hits = 0;
        for (long p = p0; p < p1; ++p) {
            Philox4x32 rng(seed, static_cast<std::uint64_t>(p));
            double y = eps;
            for (long k = 0; k < n_steps; ++k) {
                const double y1 = y + drift + sq * rng.normal();
                if (y1 <= 0.0) {
                    ++hits;
                    break;
                }
                if (bridge && rng.uniform() < std::exp(-2.0 * y * y1 / dt)) {
                    ++hits;
                    break;
                }
                y = y1;
            }
        }
        acc[0] += static_cast<double>(hits);
    };

    std::vector<double> total;
    run_chunked(cfg.n_paths, cfg, 1, worker, total);

    FptResult r;
    r.n_paths = cfg.n_paths;
    r.estimate = total[0] / static_cast<double>(cfg.n_paths);
    r.std_error = binomial_stderr(r.estimate, cfg.n_paths);
    r.exact = fpt_probability_exact(alpha, eps, t);
    r.z_score = (r.estimate - r.exact) / r.std_error;
    return r;
}

SurvivalResult simulate_killed_diffusion(const Domain& dom, double x, double t,
                                         const MCConfig& cfg) {
    const DomainSpec& spec = dom.spec;
    if (!spec.has_boundary())
        throw std::invalid_argument("simulate_killed_diffusion: domain has no boundary");
    double rho;
    if (spec.kind == DomainKind::Interval) {
        rho = std::min(x, spec.length - x);
    } else {
        rho = spec.radius - std::abs(x);
    }
    if (!(rho > 0.0))
        throw std::invalid_argument("simulate_killed_diffusion: x must be interior");
    const long n_steps = std::max(1l, std::lround(t / cfg.step_for(t)));
    const double dt = t / static_cast<double>(n_steps);
    const auto stats = run_killed_paths(dom, x, dt, {n_steps},
                                        [](double) { return 1.0; }, cfg,
                                        cfg.seed);
    SurvivalResult out;
    out.estimate = stats[0].mean;
    out.std_error = binomial_stderr(out.estimate, cfg.n_paths);
    out.fpt_upper_bound = 1.0 - fpt_probability_exact(dom.curv.alpha, rho, t);
    return out;
}

std::vector<MartingaleCheck> martingale_check(const EigenPair& ep,
                                              const Domain& dom, double x,
                                              const std::vector<double>& t_checkpoints,
                                              const MCConfig& cfg) {
    if (ep.bc != BoundaryCondition::Dirichlet)
        throw std::invalid_argument("martingale_check: Dirichlet eigenpairs only "
                                    "(reflection is not simulated)");
    if (t_checkpoints.empty())
        throw std::invalid_argument("martingale_check: no checkpoints");
    std::vector<double> ts(t_checkpoints);
    std::sort(ts.begin(), ts.end());
    if (!(ts.front() >= 0.0))
        throw std::invalid_argument("martingale_check: negative checkpoint");
    const double horizon = std::max(ts.back(), 1e-12);
    const long n_steps = std::max(1l, std::lround(horizon / cfg.step_for(horizon)));
    const double dt = horizon / static_cast<double>(n_steps);

    std::vector<long> cp_steps(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        cp_steps[i] = std::lround(ts[i] / dt);

    const DomainSpec& spec = dom.spec;
    const double phi_x = interp_grid(spec.grid, ep.phi, x);
    // value at a checkpoint is phi(X) e^{lambda t/2}; fold the deterministic
    // factor in afterwards, per checkpoint, using the snapped times
    const auto stats = run_killed_paths(
        dom, x, dt, cp_steps,
        [&](double coord) { return interp_grid(spec.grid, ep.phi, coord); }, cfg,
        cfg.seed);

    std::vector<MartingaleCheck> out(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t_snap = static_cast<double>(cp_steps[i]) * dt;
        const double w = std::exp(0.5 * ep.lambda * t_snap);
        MartingaleCheck mc;
        mc.t = t_snap;
        mc.estimate = stats[i].mean * w;
        mc.std_error = stats[i].std_error * w;
        mc.expected = phi_x;
        mc.z_score = mc.std_error > 0.0
                         ? (mc.estimate - mc.expected) / mc.std_error
                         : 0.0;
        out[i] = mc;
    }
    return out;
}

BoundaryGradientPsiResult boundary_gradient_psi(const Domain& dom, double t,
                                                const MCConfig& cfg,
                                                std::vector<double> eps_ladder) {
    const DomainSpec& spec = dom.spec;
    if (!spec.has_boundary())
        throw std::invalid_argument("boundary_gradient_psi: domain has no boundary");
    const double size = spec.kind == DomainKind::Ball ? spec.radius : spec.length;
    if (eps_ladder.empty()) {
        const double s = std::min(1.0, size / 0.8);
        eps_ladder = {0.2 * s, 0.1 * s, 0.05 * s};
    }
    std::sort(eps_ladder.begin(), eps_ladder.end(), std::greater<double>());

    std::vector<double> eps, slopes, sigmas;
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        const double e = eps_ladder[i];
        if (!(e > 0.0 && e < size))
            throw std::invalid_argument("boundary_gradient_psi: bad eps ladder");
        const double x0 = spec.kind == DomainKind::Ball ? spec.radius - e : e;
        MCConfig run = cfg;
        run.seed = cfg.seed + 0x9E3779B97F4A7C15ull * (i + 1);
        const long n_steps = std::max(1l, std::lround(t / cfg.step_for(t)));
        const double dt = t / static_cast<double>(n_steps);
        const auto st = run_killed_paths(dom, x0, dt, {n_steps},
                                         [](double) { return 1.0; }, run,
                                         run.seed);
        eps.push_back(e);
        slopes.push_back(st[0].mean / e);
        sigmas.push_back(binomial_stderr(st[0].mean, run.n_paths) / e);
    }

    // weighted affine extrapolation to eps -> 0
    double S = 0, Sx = 0, Sxx = 0, Sy = 0, Sxy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double w = 1.0 / (sigmas[i] * sigmas[i]);
        S += w;
        Sx += w * eps[i];
        Sxx += w * eps[i] * eps[i];
        Sy += w * slopes[i];
        Sxy += w * eps[i] * slopes[i];
    }
    const double det = S * Sxx - Sx * Sx;
    BoundaryGradientPsiResult out;
    out.limit = (Sxx * Sy - Sx * Sxy) / det;
    out.std_error = std::sqrt(Sxx / det);
    out.bound = psi_gradient_bound_f(dom.curv.alpha, t);
    out.eps_used = eps;
    return out;
}

} // namespace eigengrad
