// eigengrad command-line front end.
//
// Subcommands: bounds, solve, fpt, verify, report.
// Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error,
// 3 numerical failure (inconsistent inputs or non-convergence).

#include "eigengrad/bounds.hpp"
#include "eigengrad/domains.hpp"
#include "eigengrad/eigensolver.hpp"
#include "eigengrad/errors.hpp"
#include "eigengrad/mc.hpp"
#include "eigengrad/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace eigengrad;

std::string fmt(double v) { return format_double(v); }

int cmd_bounds(int d, double n, double K, double K_V, double alpha,
               double lambda, const std::string& variant, double lambda1,
               double alpha0, bool have_lambda, bool have_lambda1) {
    if (!have_lambda && !have_lambda1) {
        std::cerr << "bounds: provide --lambda and/or --lambda1\n";
        return 2;
    }
    GeometryParams g;
    g.d = d;
    g.n = n > 0 ? n : d;
    g.K = K;
    g.K_V = K_V;
    g.alpha = alpha;
    g.validate();

    if (have_lambda) {
        std::cout << "lower (CD)      " << fmt(dirichlet_lower_bound(g, lambda))
                  << "\nlower (weak)    " << fmt(dirichlet_lower_bound_weak(g, lambda))
                  << "\n";
        std::vector<UpperVariant> variants;
        if (!variant.empty()) {
            const auto v = upper_variant_from_string(variant);
            if (!v) {
                std::cerr << "bounds: unknown variant " << variant << "\n";
                return 2;
            }
            variants.push_back(*v);
        } else {
            variants = admissible_variants(g.alpha);
        }
        double best = 0.0;
        bool first = true;
        for (UpperVariant v : variants) {
            const BoundSet bs = dirichlet_upper_bound(g, lambda, v);
            std::cout << "upper [" << to_string(v) << "] " << fmt(bs.upper)
                      << "  branch=" << to_string(bs.branch);
            for (const auto& [k, val] : bs.intermediates)
                std::cout << "  " << k << "=" << fmt(val);
            std::cout << "\n";
            if (first || bs.upper < best) best = bs.upper;
            first = false;
        }
        std::cout << "upper (min)     " << fmt(best) << "\n";
    }
    if (have_lambda1) {
        GeometryParams g1 = g;
        g1.alpha = alpha0;
        const auto [c1, c2] = intro_c1_c2(g1, lambda1);
        std::cout << "c1 " << fmt(c1) << "\nc2 " << fmt(c2) << "\n";
    }
    return 0;
}

int cmd_solve(const std::string& domain, double length, double radius, int dim,
              const std::string& bc, int modes, int grid,
              const std::string& drift) {
    Domain dom;
    std::vector<EigenPair> eps;
    if (domain == "interval") {
        std::function<double(double)> V;
        if (!drift.empty()) {
            const double c = std::stod(drift);
            V = [c](double x) { return c * x * x; };
        }
        dom = make_interval(length, V, grid);
        eps = solve_interval(dom.spec,
                             bc == "neumann" ? BoundaryCondition::Neumann
                                             : BoundaryCondition::Dirichlet,
                             modes);
    } else if (domain == "ball") {
        dom = make_ball(dim, radius, grid);
        eps = solve_ball_radial(dom.spec, modes);
    } else if (domain == "circle") {
        dom = make_circle(length, grid);
        eps = circle_modes(dom.spec, modes);
    } else {
        std::cerr << "solve: unknown domain " << domain << "\n";
        return 2;
    }
    std::cout << "alpha " << fmt(dom.curv.alpha) << "  K_V "
              << fmt(dom.curv.K_V) << "\n";
    std::cout << "k\tlambda\tratio\tgrad_sup\tgrad_boundary\n";
    for (std::size_t k = 0; k < eps.size(); ++k)
        std::cout << k + 1 << "\t" << fmt(eps[k].lambda) << "\t"
                  << fmt(gradient_ratio(eps[k])) << "\t" << fmt(eps[k].norm_grad)
                  << "\t" << fmt(eps[k].norm_grad_boundary) << "\n";
    return 0;
}

int cmd_fpt(double alpha, double eps, double t, long paths, std::uint64_t seed,
            double dt, bool no_bridge) {
    MCConfig cfg;
    cfg.n_paths = paths;
    cfg.seed = seed;
    cfg.dt = dt;
    cfg.bridge_correction = !no_bridge;
    const FptResult r = simulate_fpt(alpha, eps, t, cfg);
    std::cout << "exact    " << fmt(r.exact) << "\nestimate " << fmt(r.estimate)
              << "\nstderr   " << fmt(r.std_error) << "\nz        "
              << fmt(r.z_score) << "\n";
    return std::abs(r.z_score) <= 4.0 ? 0 : 1;
}

int cmd_verify(const std::string& config_path, const std::string& out_override) {
    VerifyConfig cfg = parse_config_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    const VerificationReport rep = run_verify(cfg);
    write_report_files(rep, cfg.out_dir);
    std::cout << rep.domain_id << "  mode=" << rep.mode << "\n";
    for (const auto& row : rep.rows)
        std::cout << "  lambda=" << fmt(row.lambda) << "  lb=" << fmt(row.lower)
                  << "  ratio=" << fmt(row.ratio) << "  ub=" << fmt(row.upper)
                  << "  " << (row.pass ? "ok" : "VIOLATION") << "\n";
    for (std::size_t i = 0; i < rep.fpt.size(); ++i)
        std::cout << "  fpt[" << i << "] exact=" << fmt(rep.fpt[i].exact)
                  << " est=" << fmt(rep.fpt[i].estimate)
                  << " z=" << fmt(rep.fpt[i].z_score) << "\n";
    for (const auto& m : rep.martingale)
        std::cout << "  martingale t=" << fmt(m.t) << " est=" << fmt(m.estimate)
                  << " expected=" << fmt(m.expected) << " z=" << fmt(m.z) << "\n";
    std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_report(const std::string& in_path, const std::string& out_dir) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "report: cannot open " << in_path << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const VerificationReport rep = report_from_json(ss.str());
    write_report_files(rep, out_dir);
    std::cout << rep.domain_id << "  rows=" << rep.rows.size()
              << "  pass=" << (rep.pass ? "true" : "false") << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-sided eigenfunction gradient bound verification"};
    app.require_subcommand(1);

    // bounds
    auto* sb = app.add_subcommand("bounds", "evaluate closed-form bounds");
    int d = 1;
    double n = -1, K = 0, K_V = 0, alpha = 0, lambda = 0, lambda1 = 0, alpha0 = 0;
    std::string variant;
    sb->add_option("--d", d);
    sb->add_option("--n", n);
    sb->add_option("--K", K);
    sb->add_option("--K-V,--KV", K_V);
    sb->add_option("--alpha", alpha);
    auto* optl = sb->add_option("--lambda", lambda);
    sb->add_option("--variant", variant);
    auto* optl1 = sb->add_option("--lambda1", lambda1);
    sb->add_option("--alpha0", alpha0);

    // solve
    auto* ss = app.add_subcommand("solve", "solve model-domain eigenproblems");
    std::string domain = "interval", bc = "dirichlet", drift;
    double length = 3.141592653589793, radius = 1.0;
    int dim = 2, modes = 5, grid = 2048;
    ss->add_option("--domain", domain)->required();
    ss->add_option("--length,--L", length);
    ss->add_option("--radius,--R", radius);
    ss->add_option("--dim", dim);
    ss->add_option("--bc", bc);
    ss->add_option("--modes", modes);
    ss->add_option("--grid", grid);
    ss->add_option("--drift", drift);

    // fpt
    auto* sf = app.add_subcommand("fpt", "first-passage law: exact vs Monte Carlo");
    double f_alpha = 0, f_eps = 0, f_t = 0, f_dt = 0;
    long paths = 1000000;
    std::uint64_t seed = 12345;
    bool no_bridge = false;
    sf->add_option("--alpha", f_alpha);
    sf->add_option("--eps", f_eps)->required()->check(CLI::PositiveNumber);
    sf->add_option("--t", f_t)->required()->check(CLI::PositiveNumber);
    sf->add_option("--paths", paths);
    sf->add_option("--seed", seed);
    sf->add_option("--dt", f_dt);
    sf->add_flag("--no-bridge", no_bridge);

    // verify
    auto* sv = app.add_subcommand("verify", "run a config-driven verification");
    std::string config_path, out_dir;
    sv->add_option("--config", config_path)->required();
    sv->add_option("--out", out_dir);

    // report
    auto* sr = app.add_subcommand("report", "re-emit files from a report.json");
    std::string in_path, rout_dir = ".";
    sr->add_option("--in", in_path)->required();
    sr->add_option("--out", rout_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (sb->parsed())
            return cmd_bounds(d, n, K, K_V, alpha, lambda, variant, lambda1,
                              alpha0, optl->count() > 0, optl1->count() > 0);
        if (ss->parsed())
            return cmd_solve(domain, length, radius, dim, bc, modes, grid, drift);
        if (sf->parsed())
            return cmd_fpt(f_alpha, f_eps, f_t, paths, seed, f_dt, no_bridge);
        if (sv->parsed()) return cmd_verify(config_path, out_dir);
        if (sr->parsed()) return cmd_report(in_path, rout_dir);
    } catch (const eigengrad::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
