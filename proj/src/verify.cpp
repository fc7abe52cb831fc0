#include "eigengrad/verify.hpp"

#include "eigengrad/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace eigengrad {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string domain_label(const VerifyConfig& cfg) {
    std::ostringstream os;
    switch (cfg.kind) {
        case DomainKind::Interval:
            os << "interval[0," << format_double(cfg.length) << "]";
            if (!cfg.drift.empty()) os << "+drift(" << cfg.drift << ")";
            break;
        case DomainKind::Ball:
            os << "ball(d=" << cfg.dim << ",R=" << format_double(cfg.radius) << ")";
            break;
        case DomainKind::Circle:
            os << "circle(L=" << format_double(cfg.length) << ")";
            break;
    }
    return os.str();
}

std::function<double(double)> parse_profile(const std::string& s,
                                            const char* what) {
    if (s.empty() || s == "none") return {};
    const auto colon = s.find(':');
    const std::string name = s.substr(0, colon);
    double c = 1.0;
    if (colon != std::string::npos) c = std::stod(s.substr(colon + 1));
    if (name == "quadratic") return [c](double x) { return c * x * x; };
    if (name == "linear") return [c](double x) { return c * x; };
    throw std::invalid_argument(std::string("unknown ") + what + " profile: " + s);
}

Domain build_domain(const VerifyConfig& cfg) {
    switch (cfg.kind) {
        case DomainKind::Interval:
            return make_interval(cfg.length, parse_profile(cfg.drift, "drift"),
                                 cfg.grid);
        case DomainKind::Ball:
            return make_ball(cfg.dim, cfg.radius, cfg.grid);
        case DomainKind::Circle:
            return make_circle(cfg.length, cfg.grid);
    }
    throw std::invalid_argument("unknown domain kind");
}

// Reference-function samples on the domain grid: f, |grad log f|^2, L log f.
ReferenceFunction build_reference_function(const Domain& dom,
                                           const std::string& spec_str) {
    const auto& grid = dom.spec.grid;
    const double h = dom.spec.spacing();
    std::vector<double> f(grid.size());
    if (spec_str == "constant" || spec_str == "one") {
        ReferenceFunction rf;
        rf.samples.assign(grid.size(), 1.0);
        rf.log_grad_sq.assign(grid.size(), 0.0);
        rf.l_log_f.assign(grid.size(), 0.0);
        rf.sup_norm = 1.0;
        return rf;
    }
    auto fn = parse_profile(spec_str, "reference function");
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = 1.0 + fn(grid[i]);

    std::vector<double> logf(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(f[i] >= 1.0 - 1e-12))
            throw std::invalid_argument("reference function must satisfy f >= 1");
        logf[i] = std::log(f[i]);
    }
    const std::size_t n = grid.size();
    std::vector<double> dlf(n), ddlf(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        dlf[i] = (logf[i + 1] - logf[i - 1]) / (2.0 * h);
        ddlf[i] = (logf[i + 1] - 2.0 * logf[i] + logf[i - 1]) / (h * h);
    }
    dlf[0] = (-3.0 * logf[0] + 4.0 * logf[1] - logf[2]) / (2.0 * h);
    dlf[n - 1] = (3.0 * logf[n - 1] - 4.0 * logf[n - 2] + logf[n - 3]) / (2.0 * h);
    ddlf[0] = (2.0 * logf[0] - 5.0 * logf[1] + 4.0 * logf[2] - logf[3]) / (h * h);
    ddlf[n - 1] =
        (2.0 * logf[n - 1] - 5.0 * logf[n - 2] + 4.0 * logf[n - 3] - logf[n - 4]) /
        (h * h);

    // L log f = (log f)'' + V' (log f)'
    std::vector<double> vprime(n, 0.0);
    if (!dom.spec.drift_potential.empty()) {
        const auto& V = dom.spec.drift_potential;
        for (std::size_t i = 1; i + 1 < n; ++i)
            vprime[i] = (V[i + 1] - V[i - 1]) / (2.0 * h);
        vprime[0] = (-3.0 * V[0] + 4.0 * V[1] - V[2]) / (2.0 * h);
        vprime[n - 1] = (3.0 * V[n - 1] - 4.0 * V[n - 2] + V[n - 3]) / (2.0 * h);
    }

    ReferenceFunction rf;
    rf.samples = f;
    rf.log_grad_sq.resize(n);
    rf.l_log_f.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rf.log_grad_sq[i] = dlf[i] * dlf[i];
        rf.l_log_f[i] = ddlf[i] + vprime[i] * dlf[i];
    }
    rf.sup_norm = *std::max_element(f.begin(), f.end());
    rf.validate();
    return rf;
}

BoundaryCondition bc_from_string(const std::string& s) {
    if (s == "dirichlet") return BoundaryCondition::Dirichlet;
    if (s == "neumann") return BoundaryCondition::Neumann;
    if (s == "closed") return BoundaryCondition::Closed;
    throw std::invalid_argument("unknown boundary condition: " + s);
}

std::string bc_to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::Dirichlet: return "dirichlet";
        case BoundaryCondition::Neumann: return "neumann";
        case BoundaryCondition::Closed: return "closed";
    }
    return "?";
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

VerifyConfig parse_config_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    VerifyConfig cfg;
    try {
        const auto& d = j.at("domain");
        const std::string kind = d.at("kind").get<std::string>();
        if (kind == "interval")
            cfg.kind = DomainKind::Interval;
        else if (kind == "ball")
            cfg.kind = DomainKind::Ball;
        else if (kind == "circle")
            cfg.kind = DomainKind::Circle;
        else
            throw std::invalid_argument("unknown domain kind: " + kind);
        cfg.length = d.value("length", cfg.length);
        cfg.radius = d.value("radius", cfg.radius);
        cfg.dim = d.value("dim", cfg.kind == DomainKind::Ball ? 2 : 1);
        cfg.grid = d.value("grid", cfg.grid);
        cfg.drift = d.value("drift", std::string());

        cfg.bc = bc_from_string(j.value("bc", cfg.kind == DomainKind::Circle
                                                  ? std::string("closed")
                                                  : std::string("dirichlet")));
        cfg.modes = j.value("modes", cfg.modes);

        if (j.contains("bounds")) {
            const auto& b = j.at("bounds");
            if (b.contains("n")) cfg.n = b.at("n").get<double>();
            if (b.contains("K")) cfg.K = b.at("K").get<double>();
            if (b.contains("K_V")) cfg.K_V = b.at("K_V").get<double>();
            if (b.contains("alpha")) cfg.alpha = b.at("alpha").get<double>();
            if (b.contains("variants"))
                for (const auto& v : b.at("variants")) {
                    const auto parsed =
                        upper_variant_from_string(v.get<std::string>());
                    if (!parsed)
                        throw std::invalid_argument("unknown bound variant: " +
                                                    v.get<std::string>());
                    cfg.variants.push_back(*parsed);
                }
        }
        cfg.reference_function = j.value("reference_function", std::string());

        if (j.contains("mc")) {
            const auto& m = j.at("mc");
            cfg.mc_enabled = m.value("enabled", true);
            cfg.mc_paths = m.value("paths", cfg.mc_paths);
            cfg.mc_seed = m.value("seed", cfg.mc_seed);
            cfg.mc_dt_factor = m.value("dt_factor", cfg.mc_dt_factor);
            cfg.mc_bridge = m.value("bridge", cfg.mc_bridge);
            cfg.mc_z_threshold = m.value("z_threshold", cfg.mc_z_threshold);
            if (m.contains("fpt_cases"))
                for (const auto& c : m.at("fpt_cases"))
                    cfg.fpt_cases.push_back({c.at("alpha").get<double>(),
                                             c.at("eps").get<double>(),
                                             c.at("t").get<double>()});
            if (m.contains("martingale")) {
                cfg.martingale_x = m.at("martingale").at("x").get<double>();
                for (const auto& t : m.at("martingale").at("checkpoints"))
                    cfg.martingale_checkpoints.push_back(t.get<double>());
            }
        }
        cfg.out_dir = j.value("out", std::string("."));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config error: ") + e.what());
    }
    if (cfg.mc_dt_factor < 100.0)
        throw std::invalid_argument("config: mc.dt_factor must be >= 100");
    return cfg;
}

VerifyConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

VerificationReport run_verify(const VerifyConfig& cfg) {
    const Domain dom = build_domain(cfg);

    GeometryParams g;
    g.d = dom.spec.dim;
    g.n = cfg.n.value_or(static_cast<double>(g.d));
    g.K_V = cfg.K_V.value_or(dom.curv.K_V);
    g.alpha = cfg.alpha.value_or(dom.curv.alpha);
    if (cfg.K) {
        g.K = *cfg.K;
    } else if (cfg.kind == DomainKind::Interval && !cfg.drift.empty()) {
        g.K = cd_constant_for_interval(dom, g.n);
    } else {
        g.K = dom.curv.K0;
    }
    g.validate();

    std::vector<EigenPair> modes;
    switch (cfg.kind) {
        case DomainKind::Interval:
            modes = solve_interval(dom.spec, cfg.bc, cfg.modes);
            break;
        case DomainKind::Ball:
            if (cfg.bc != BoundaryCondition::Dirichlet)
                throw std::invalid_argument("ball domain: only the Dirichlet "
                                            "radial problem is supported");
            modes = solve_ball_radial(dom.spec, cfg.modes);
            break;
        case DomainKind::Circle:
            modes = circle_modes(dom.spec, cfg.modes);
            break;
    }

    VerificationReport rep;
    rep.domain_id = domain_label(cfg);
    rep.mode = bc_to_string(cfg.bc == BoundaryCondition::Closed ||
                                    cfg.kind == DomainKind::Circle
                                ? BoundaryCondition::Closed
                                : cfg.bc);
    rep.z_threshold = cfg.mc_z_threshold;

    std::optional<ReferenceFunction> rf;
    if (!cfg.reference_function.empty()) {
        // suprema for c_eps(f) and K(f) are taken at twice the solver
        // resolution so grid refinement is already priced in
        VerifyConfig fine = cfg;
        fine.grid = 2 * cfg.grid;
        rf = build_reference_function(build_domain(fine), cfg.reference_function);
    }

    for (const EigenPair& ep : modes) {
        SandwichRow row;
        row.lambda = ep.lambda;
        row.ratio = gradient_ratio(ep);
        if (ep.bc == BoundaryCondition::Dirichlet) {
            BoundSet best;
            if (cfg.variants.empty()) {
                best = dirichlet_upper_bound_best(g, ep.lambda);
            } else {
                bool first = true;
                for (UpperVariant v : cfg.variants) {
                    BoundSet bs = dirichlet_upper_bound(g, ep.lambda, v);
                    if (first || bs.upper < best.upper) {
                        best = bs;
                        first = false;
                    }
                }
            }
            row.lower = best.lower;
            row.upper = best.upper;
            row.branch = to_string(best.branch);
            row.variant = to_string(best.variant);
        } else if (rf) {
            const double kf = compute_K_f(*rf, g.K_V);
            row.lower = reference_function_lower_bound(*rf, g, ep.lambda);
            row.upper = rf->sup_norm * neumann_upper_bound(kf, ep.lambda);
            row.branch = "";
            row.variant = "reference_function";
        } else {
            row.lower = neumann_lower_bound(g, ep.lambda);
            row.upper = neumann_upper_bound(g.K_V, ep.lambda);
            row.branch = "";
            row.variant = "convex";
        }
        row.margin_lower = (row.ratio - row.lower) / row.ratio;
        row.margin_upper = (row.upper - row.ratio) / row.ratio;
        row.pass = row.lower <= row.ratio && row.ratio <= row.upper;
        rep.rows.push_back(row);
    }
    rep.sandwich_pass = !rep.rows.empty();
    for (const auto& r : rep.rows) rep.sandwich_pass = rep.sandwich_pass && r.pass;

    if (cfg.mc_enabled) {
        for (const auto& c : cfg.fpt_cases) {
            MCConfig mc;
            mc.n_paths = cfg.mc_paths;
            mc.seed = cfg.mc_seed;
            mc.dt = c.t / cfg.mc_dt_factor;
            mc.bridge_correction = cfg.mc_bridge;
            const FptResult r = simulate_fpt(c.alpha, c.eps, c.t, mc);
            rep.fpt.push_back(r);
            rep.fpt_cases.push_back(c);
            rep.mc_pass = rep.mc_pass && std::abs(r.z_score) <= cfg.mc_z_threshold;
        }
        if (cfg.martingale_x && !cfg.martingale_checkpoints.empty() &&
            !modes.empty() && modes[0].bc == BoundaryCondition::Dirichlet) {
            MCConfig mc;
            mc.n_paths = cfg.mc_paths;
            mc.seed = cfg.mc_seed + 1;
            const double horizon =
                *std::max_element(cfg.martingale_checkpoints.begin(),
                                  cfg.martingale_checkpoints.end());
            mc.dt = horizon / cfg.mc_dt_factor;
            const auto checks = martingale_check(modes[0], dom, *cfg.martingale_x,
                                                 cfg.martingale_checkpoints, mc);
            for (const auto& c : checks) {
                rep.martingale.push_back(
                    {c.t, c.estimate, c.std_error, c.expected, c.z_score});
                rep.mc_pass =
                    rep.mc_pass && std::abs(c.z_score) <= cfg.mc_z_threshold;
            }
        }
    }
    rep.pass = rep.sandwich_pass && rep.mc_pass;
    return rep;
}

// ---------------------------------------------------------------------------
// serialisation
// ---------------------------------------------------------------------------

std::string report_to_json(const VerificationReport& r) {
    ordered_json j;
    j["domain_id"] = r.domain_id;
    j["mode"] = r.mode;
    j["z_threshold"] = r.z_threshold;
    j["rows"] = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json o;
        o["lambda"] = row.lambda;
        o["ratio"] = row.ratio;
        o["lb"] = row.lower;
        o["ub"] = row.upper;
        o["branch"] = row.branch;
        o["variant"] = row.variant;
        o["margin_lb"] = row.margin_lower;
        o["margin_ub"] = row.margin_upper;
        o["pass"] = row.pass;
        j["rows"].push_back(o);
    }
    j["fpt"] = ordered_json::array();
    for (std::size_t i = 0; i < r.fpt.size(); ++i) {
        const auto& f = r.fpt[i];
        ordered_json o;
        if (i < r.fpt_cases.size()) {
            o["alpha"] = r.fpt_cases[i].alpha;
            o["eps"] = r.fpt_cases[i].eps;
            o["t"] = r.fpt_cases[i].t;
        }
        o["estimate"] = f.estimate;
        o["stderr"] = f.std_error;
        o["exact"] = f.exact;
        o["z"] = f.z_score;
        o["n_paths"] = f.n_paths;
        j["fpt"].push_back(o);
    }
    j["martingale"] = ordered_json::array();
    for (const auto& m : r.martingale) {
        ordered_json o;
        o["t"] = m.t;
        o["estimate"] = m.estimate;
        o["stderr"] = m.std_error;
        o["expected"] = m.expected;
        o["z"] = m.z;
        j["martingale"].push_back(o);
    }
    j["sandwich_pass"] = r.sandwich_pass;
    j["mc_pass"] = r.mc_pass;
    j["pass"] = r.pass;
    return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    VerificationReport r;
    r.domain_id = j.at("domain_id").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.z_threshold = j.at("z_threshold").get<double>();
    for (const auto& o : j.at("rows")) {
        SandwichRow row;
        row.lambda = o.at("lambda").get<double>();
        row.ratio = o.at("ratio").get<double>();
        row.lower = o.at("lb").get<double>();
        row.upper = o.at("ub").get<double>();
        row.branch = o.at("branch").get<std::string>();
        row.variant = o.at("variant").get<std::string>();
        row.margin_lower = o.at("margin_lb").get<double>();
        row.margin_upper = o.at("margin_ub").get<double>();
        row.pass = o.at("pass").get<bool>();
        r.rows.push_back(row);
    }
    for (const auto& o : j.at("fpt")) {
        FptResult f;
        f.estimate = o.at("estimate").get<double>();
        f.std_error = o.at("stderr").get<double>();
        f.exact = o.at("exact").get<double>();
        f.z_score = o.at("z").get<double>();
        f.n_paths = o.at("n_paths").get<long>();
        r.fpt.push_back(f);
        if (o.contains("alpha"))
            r.fpt_cases.push_back({o.at("alpha").get<double>(),
                                   o.at("eps").get<double>(),
                                   o.at("t").get<double>()});
    }
    for (const auto& o : j.at("martingale"))
        r.martingale.push_back({o.at("t").get<double>(),
                                o.at("estimate").get<double>(),
                                o.at("stderr").get<double>(),
                                o.at("expected").get<double>(),
                                o.at("z").get<double>()});
    r.sandwich_pass = j.at("sandwich_pass").get<bool>();
    r.mc_pass = j.at("mc_pass").get<bool>();
    r.pass = j.at("pass").get<bool>();
    return r;
}

std::string report_to_csv(const VerificationReport& r) {
    std::string out = "lambda,ratio,lb,ub,branch,margin_lb,margin_ub\n";
    for (const auto& row : r.rows) {
        out += format_double(row.lambda) + "," + format_double(row.ratio) + "," +
               format_double(row.lower) + "," + format_double(row.upper) + "," +
               row.branch + "," + format_double(row.margin_lower) + "," +
               format_double(row.margin_upper) + "\n";
    }
    return out;
}

void write_report_files(const VerificationReport& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw numeric_error("cannot write output file: " + name);
        out << content;
    };
    write("report.json", report_to_json(r));
    write("report.csv", report_to_csv(r));

    std::string tsv = "sqrt_lambda\tratio\tlb\tub\n";
    for (const auto& row : r.rows)
        tsv += format_double(std::sqrt(row.lambda)) + "\t" +
               format_double(row.ratio) + "\t" + format_double(row.lower) +
               "\t" + format_double(row.upper) + "\n";
    write("sandwich.tsv", tsv);

    if (!r.fpt.empty()) {
        std::string ftsv = "alpha\teps\tt\texact\testimate\tstderr\tz\n";
        for (std::size_t i = 0; i < r.fpt.size(); ++i) {
            const auto& c = r.fpt_cases[i];
            const auto& f = r.fpt[i];
            ftsv += format_double(c.alpha) + "\t" + format_double(c.eps) + "\t" +
                    format_double(c.t) + "\t" + format_double(f.exact) + "\t" +
                    format_double(f.estimate) + "\t" +
                    format_double(f.std_error) + "\t" +
                    format_double(f.z_score) + "\n";
        }
        write("fpt.tsv", ftsv);
    }
}

} // namespace eigengrad
