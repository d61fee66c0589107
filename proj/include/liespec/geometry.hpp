#pragma once

// Diameters of (G, g_A).
//
// By left invariance diam(G, g_A) = max_a d(e, a). The estimators here are:
//  - flat tori: covering radius of ℤ^m under the quadratic form (A Aᵀ)⁻¹,
//    bracketed on a grid;
//  - bi-invariant metrics: closed forms through the exponential map;
//  - SU(2)/SO(3): shortest paths on a k-nearest-neighbour net, where the edge
//    p→q has weight ‖log(p⁻¹q)‖_{g_A}, the exact g_A-length of the curve
//    t ↦ p·exp(t·log(p⁻¹q)). Graph distances therefore over-estimate the
//    true distances to the net nodes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liespec/lie_core.hpp"
#include "liespec/metric_space.hpp"

namespace liespec {

enum class DiameterMethod { TorusCoveringRadius, BiInvariantClosedForm, GeodesicGraph, HorizontalGraph, AnalyticBounds };

std::string_view to_string(DiameterMethod m);

struct DiameterEstimate {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    DiameterMethod method = DiameterMethod::AnalyticBounds;
    std::size_t net_size = 0;
    std::size_t knn = 0;
    std::size_t grid_resolution = 0;
    std::optional<GroupElement> farthest_point;
    /// No certified bracket (horizontal graph).
    bool heuristic = false;
    std::string notes;
};

// --- flat tori ------------------------------------------------------------

/// Exact closest lattice point of ℤ^m to x under ‖·‖_gram (Schnorr–Euchner
/// enumeration on the Cholesky factor), m ≤ 4. Returns the squared distance.
double closest_lattice_distance_squared(const Matrix& gram, std::span<const double> x,
                                        std::vector<long>* closest = nullptr);

/// Covering radius of ℤ^m under gram = (A Aᵀ)⁻¹, m ≤ 3. Grid of
/// grid_resolution^m points plus one local refinement around the maximizer.
/// lower = value = best evaluated distance; upper = best grid value + the
/// largest ‖δ‖_gram over half-cell offsets δ.
DiameterEstimate torus_diameter(const LieGroup& g, const MetricSpec& spec, std::size_t grid_resolution = 64);

// --- bi-invariant closed forms --------------------------------------------

/// d_{g_I}(e, a) = ‖log a‖ minimized over log branches.
double biinvariant_distance(const LieGroup& g, const GroupElement& a);
/// SU2: π at −1; SO3: π/2 at a half turn; T^m: √m/2 at the deep hole;
/// products: root-sum-square of the factors.
DiameterEstimate biinvariant_diameter(const LieGroup& g);

// --- nets -----------------------------------------------------------------

/// Nodes on S³ (SO3: sign-canonical), node 0 is the identity. Adjacency is
/// the symmetrized knn graph under the bi-invariant distance, stored CSR with
/// the left-trivialized edge vectors log(p⁻¹q).
struct Net {
    GroupKind kind = GroupKind::SU2;
    std::vector<Quaternion> nodes;
    std::vector<std::size_t> offsets; // size n+1
    std::vector<std::uint32_t> targets;
    /// log(p⁻¹q) for each CSR edge; for SO3 the principal (angle ≤ π/2) branch.
    std::vector<std::array<double, 3>> edge_log;
    /// SO3 only: log of the other sign representative.
    std::vector<std::array<double, 3>> edge_log_alt;
    std::size_t knn = 0;
    std::uint64_t seed = 0;
    /// max over nodes of the distance to the nearest other node
    double mesh = 0.0;

    std::size_t size() const { return nodes.size(); }
    std::size_t edge_count() const { return targets.size(); }
};

/// Super-Fibonacci spiral points on S³, left-translated so node 0 is the
/// identity and conjugated by a seeded random rotation. Requires n ≥ 100,
/// knn ≥ 6 and g ∈ {SU2, SO3}. Missing connectivity is repaired by linking
/// closest pairs across components.
Net build_net(const LieGroup& g, std::size_t n_nodes, std::size_t knn, std::uint64_t seed);

/// Rebuild adjacency for stored nodes (cache files keep only the nodes).
Net net_from_nodes(const LieGroup& g, std::vector<Quaternion> nodes, std::size_t knn, std::uint64_t seed);

/// Plain text: node count, then one "w x y z" line per node.
void save_net_nodes(const Net& net, const std::string& path);
std::vector<Quaternion> load_net_nodes(const std::string& path);

/// If $LIESPEC_NET_CACHE names a directory, load/store nodes there keyed by
/// (group, n, seed); otherwise just build.
Net cached_net(const LieGroup& g, std::size_t n_nodes, std::size_t knn, std::uint64_t seed);

inline constexpr double kDefaultNetEpsilon = 0.10;

/// Single-source shortest paths from the identity; value = farthest node
/// distance, upper = value, lower = value·(1 − eps_net).
///
/// Every path is a chain of segments p·exp(t·log(p⁻¹q)), whose g_A-length is
/// exactly ‖log(p⁻¹q)‖_{g_A}, so each node distance bounds the true distance
/// from above. With any_angle (default) a relaxation u→v also tries the
/// straight segment from u's tree parent to v, which removes most of the
/// zig-zag of strongly anisotropic metrics. Without it the edge set is fixed
/// and the result is exactly monotone under the Loewner order.
DiameterEstimate graph_diameter(const LieGroup& g, const MetricSpec& spec, const Net& net,
                                double eps_net = kDefaultNetEpsilon, bool any_angle = true);

/// Distances from the identity to every node under the quadratic form q
/// (edge weight sqrt(vᵀ q v), SO3 takes the cheaper sign branch).
std::vector<double> net_distances(const Net& net, const Matrix& q);
/// Same with the parent-shortcut relaxation.
std::vector<double> net_distances_any_angle(const Net& net, const Matrix& q);

struct HorizontalOptions {
    /// candidate neighbours examined per node
    std::size_t n_directions = 64;
    /// admissible edges have ‖v_⊥‖ ≤ eta·‖v‖
    double eta = 0.2;
};

/// Heuristic sub-Riemannian diameter for the distribution H with inner
/// product h (Gram matrix in the given basis). Admissible edges are weighted
/// sqrt(‖v_H‖_h² + ‖v_⊥‖²/eta²), with v_H the g_I-orthogonal projection, and
/// searched with the same parent-shortcut relaxation as graph_diameter.
/// Always flagged heuristic; throws ValidationError if H is not bracket
/// generating.
DiameterEstimate horizontal_graph_diameter(const LieGroup& g, std::span<const Vector> h_basis, const Matrix& h,
                                           const Net& net, const HorizontalOptions& options = {});

// --- analytic brackets ----------------------------------------------------

struct BoundEndpoint {
    double value = 0.0;
    std::string source;
};

struct DiameterBounds {
    BoundEndpoint lower;
    BoundEndpoint upper;
};

/// General: [diam(g_I)/σ_1, diam(g_I)/σ_m]. SU2: [π/(2σ_2), π/σ_2].
/// SO3: [π/(2σ_2), √3π/(2σ_2)].
DiameterBounds analytic_diameter_bounds(const LieGroup& g, const MetricSpec& spec);

} // namespace liespec
