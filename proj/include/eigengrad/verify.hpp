#pragma once

#include "eigengrad/bounds.hpp"
#include "eigengrad/domains.hpp"
#include "eigengrad/eigensolver.hpp"
#include "eigengrad/mc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eigengrad {

/// Declarative verification job, parsed from a JSON config file.
struct VerifyConfig {
    // domain
    DomainKind kind = DomainKind::Interval;
    double length = 3.141592653589793;
    double radius = 1.0;
    int dim = 1;
    int grid = 2048;
    std::string drift;       ///< "" | "quadratic:<c>" (V = c x^2)
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    int modes = 5;

    // bound parameters; negative/unset fields default from the domain
    std::optional<double> n, K, K_V, alpha;
    std::vector<UpperVariant> variants; ///< empty = all admissible

    // optional reference function for the non-convex route (Neumann only)
    // "constant" | "linear:<c>" (f = 1 + c x) | "quadratic:<c>" (f = 1 + c x^2)
    std::string reference_function;

    // Monte-Carlo appendix
    bool mc_enabled = false;
    long mc_paths = 200'000;
    std::uint64_t mc_seed = 42;
    double mc_dt_factor = 500.0; ///< dt = horizon / factor
    bool mc_bridge = true;
    double mc_z_threshold = 4.0;
    struct FptCase { double alpha, eps, t; };
    std::vector<FptCase> fpt_cases;
    std::optional<double> martingale_x;
    std::vector<double> martingale_checkpoints;

    std::string out_dir = ".";
};

VerifyConfig parse_config_file(const std::string& path);
VerifyConfig parse_config_json(const std::string& text);

struct SandwichRow {
    double lambda = 0.0;
    double ratio = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::string branch;
    std::string variant;
    double margin_lower = 0.0; ///< (ratio - lower)/ratio
    double margin_upper = 0.0; ///< (upper - ratio)/ratio
    bool pass = false;
};

struct MartingaleRow {
    double t = 0.0, estimate = 0.0, std_error = 0.0, expected = 0.0, z = 0.0;
};

struct VerificationReport {
    std::string domain_id;
    std::string mode; ///< dirichlet | neumann | closed
    std::vector<SandwichRow> rows;
    std::vector<FptResult> fpt;
    std::vector<VerifyConfig::FptCase> fpt_cases;
    std::vector<MartingaleRow> martingale;
    double z_threshold = 4.0;
    bool sandwich_pass = false;
    bool mc_pass = true;
    bool pass = false;
};

/// Run the full pipeline for one config. Throws numeric_error /
/// std::invalid_argument on numerical or config inconsistencies.
VerificationReport run_verify(const VerifyConfig& cfg);

std::string report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);
/// Fixed columns: lambda,ratio,lb,ub,branch,margin_lb,margin_ub
std::string report_to_csv(const VerificationReport& r);

/// Writes report.json, report.csv, sandwich.tsv (sqrt_lambda ratio lb ub)
/// and, when MC ran, fpt.tsv into dir. Output is byte-stable for identical
/// inputs.
void write_report_files(const VerificationReport& r, const std::string& dir);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

} // namespace eigengrad
