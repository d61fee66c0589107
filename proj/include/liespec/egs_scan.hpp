#pragma once

// Experiment driver: the ratio λ_1·diam², seeded scans over random metrics,
// degeneration sweeps and a randomized self-check of the library invariants.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liespec/geometry.hpp"
#include "liespec/lie_core.hpp"
#include "liespec/metric_space.hpp"
#include "liespec/rep_theory.hpp"

namespace liespec {

enum class DiamMethodChoice { Auto, Graph, Lattice, BiInvariant, Bounds };

std::string_view to_string(DiamMethodChoice c);
/// "auto", "graph", "lattice", "biinv", "bounds"; throws ValidationError.
DiamMethodChoice parse_diam_method(std::string_view text);

struct DiamConfig {
    DiamMethodChoice method = DiamMethodChoice::Auto;
    std::size_t net_size = 20000;
    std::size_t knn = 12;
    std::size_t grid_resolution = 64;
    double eps_net = kDefaultNetEpsilon;
    std::uint64_t net_seed = 0;
};

/// Auto picks lattice for tori, graph for SU2/SO3 and bounds otherwise. Graph
/// needs a net; pass one to reuse it across calls, otherwise it is built
/// (or loaded from $LIESPEC_NET_CACHE).
DiameterEstimate estimate_diameter(const LieGroup& g, const MetricSpec& spec, const DiamConfig& cfg,
                                   const Net* net = nullptr);

/// Whether estimate_diameter would need a net for this group and config.
bool needs_net(const LieGroup& g, const DiamConfig& cfg);

/// 1e-6 absolute for exact pipelines (torus, closed forms), 10% relative for nets.
inline constexpr double kExactTolerance = 1e-6;
inline constexpr double kNetTolerance = 0.10;

struct CheckFlags {
    bool li_ok = true;
    bool simple_bounds_ok = true;
    bool remark_diam_ok = true;
    bool remark_lambda_ok = true;
    bool urakawa_ok = true;

    bool all() const { return li_ok && simple_bounds_ok && remark_diam_ok && remark_lambda_ok && urakawa_ok; }
};

struct ScanRecord {
    std::uint64_t seed = 0;
    std::string group;
    std::size_t m = 0;
    Vector sigma;
    double lambda1 = 0.0;
    bool lambda1_certified = false;
    std::string lambda1_witness;
    double diam_lower = 0.0;
    double diam_value = 0.0;
    double diam_upper = 0.0;
    DiameterMethod diam_method = DiameterMethod::AnalyticBounds;
    double ratio = 0.0;
    CheckFlags checks;
    /// the sampled matrix, for reproduction
    Matrix a;
};

/// λ_1 (certified), a diameter estimate and the check flags for one metric.
/// SU2/SO3 "remark" checks are vacuously true on other groups.
ScanRecord egs_ratio(const LieGroup& g, const MetricSpec& spec, const DiamConfig& cfg, const Net* net = nullptr,
                     std::uint64_t seed = 0);

struct ScanViolation {
    std::size_t index = 0;
    std::vector<std::string> failed;
    std::string reproduce;
};

struct ScanSummary {
    std::size_t samples = 0;
    double max_ratio = 0.0;
    std::size_t argmax = 0;
    Vector argmax_sigma;
    std::size_t li_violations = 0;
    std::size_t simple_bounds_violations = 0;
    std::size_t remark_diam_violations = 0;
    std::size_t remark_lambda_violations = 0;
    std::size_t urakawa_violations = 0;
    std::size_t uncertified = 0;
    std::vector<ScanViolation> violations;
};

struct ScanResult {
    std::vector<ScanRecord> records;
    ScanSummary summary;
};

struct ScanOptions {
    std::size_t n_samples = 1;
    SamplerConfig sampler;
    DiamConfig diam;
    std::uint64_t base_seed = 0;
    std::size_t jobs = 1;
};

/// Sample i uses seed base_seed + i; the output does not depend on jobs.
ScanResult scan(const LieGroup& g, const ScanOptions& options);

/// One CLI call reproducing sample `seed` of a scan.
std::string reproduce_command(const LieGroup& g, const ScanOptions& options, std::uint64_t seed);

void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records);
void write_scan_json(std::ostream& out, const ScanResult& result);

// --- degeneration sweeps ----------------------------------------------------

enum class DegenerationKind { ShrinkTransverseToSubgroup, EnlargeGeneratingTriple, TorusDenseLine };

std::string_view to_string(DegenerationKind k);
/// "shrink-transverse", "enlarge-triple", "dense-line"; throws ValidationError.
DegenerationKind parse_degeneration_kind(std::string_view text);

struct DegenerationRow {
    double s = 0.0;
    Vector sigma;
    double lambda1 = 0.0;
    bool lambda1_certified = false;
    std::optional<DiameterEstimate> diam;
    double tracked = 0.0;
};

struct DegenerationReport {
    DegenerationKind kind = DegenerationKind::ShrinkTransverseToSubgroup;
    std::string group;
    Matrix p;
    /// e.g. "lambda1/sigma_kmax^2"
    std::string tracked_name;
    std::vector<DegenerationRow> rows;
    bool lambda1_strictly_decreasing = false;
    bool lambda1_strictly_increasing = false;
    /// only meaningful when every row has a diameter
    bool diam_strictly_increasing = false;
    bool tracked_strictly_decreasing = false;
};

/// Default sweep for each kind.
std::vector<double> default_s_values(DegenerationKind kind);

/// The frame P used by each kind: identity for shrink-transverse, a
/// two-generator frame for enlarge-triple, a golden-ratio line for the torus.
Matrix degeneration_frame(const LieGroup& g, DegenerationKind kind);

/// Rows sorted by s, descending for shrink-transverse and ascending otherwise.
DegenerationReport degeneration_experiment(const LieGroup& g, DegenerationKind kind, std::vector<double> s_values,
                                           const DiamConfig& cfg, const Net* net = nullptr);

// --- property suite -----------------------------------------------------------

struct PropertyCheck {
    std::string name;
    bool passed = true;
    std::size_t trials = 0;
    bool skipped = false;
    /// first counterexample, with the matrices involved
    std::string detail;
};

struct PropertyReport {
    std::string group;
    std::vector<PropertyCheck> checks;
    bool all_passed() const;
};

struct PropertyOptions {
    /// net size for the fixed-net diameter monotonicity check
    std::size_t net_size = 2000;
    std::size_t knn = 12;
};

/// Runs n_trials seeded instances of each library invariant. Throws
/// ValidationError when n_trials is 0.
PropertyReport property_suite(const LieGroup& g, std::size_t n_trials, std::uint64_t seed,
                              const PropertyOptions& options = {});

/// C_{AB} identity in one irrep: Σ (BBᵀ)_ij π(X_i(A)) π(X_j(A)) equals the
/// Casimir-type operator of A·B. Returns the max-abs residual.
double cab_identity_residual(const Irrep& irrep, const Matrix& a, const Matrix& b);

} // namespace liespec
