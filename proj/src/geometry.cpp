#include "liespec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <thread>

namespace liespec {

std::string_view to_string(DiameterMethod m) {
    switch (m) {
    case DiameterMethod::TorusCoveringRadius: return "torus_covering_radius";
    case DiameterMethod::BiInvariantClosedForm: return "biinvariant_closed_form";
    case DiameterMethod::GeodesicGraph: return "geodesic_graph";
    case DiameterMethod::HorizontalGraph: return "horizontal_graph";
    case DiameterMethod::AnalyticBounds: return "analytic_bounds";
    }
    return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

// --- lattice ----------------------------------------------------------------

namespace {

/// Schnorr–Euchner style enumeration for the closest point of ℤ^m to x under
/// gram = Rᵀ R (R upper triangular), m ≤ 4.
class ClosestLattice {
public:
    explicit ClosestLattice(const Matrix& gram) : gram_(gram), r_(cholesky(gram).transpose()), m_(gram.rows()) {
        if (m_ > kMaxDim) throw ValidationError("closest lattice point supports m <= 4");
    }

    double operator()(std::span<const double> x, std::vector<long>* closest = nullptr) {
        if (x.size() != m_) throw ValidationError("closest lattice point: dimension mismatch");
        x_ = x.data();
        double diff[kMaxDim];
        for (std::size_t i = 0; i < m_; ++i) {
            best_n_[i] = std::lround(x[i]);
            diff[i] = x[i] - static_cast<double>(best_n_[i]);
        }
        best_ = quadratic_form(gram_, std::span<const double>(diff, m_)) * (1.0 + 1e-12) + 1e-300;
        search(m_ - 1, 0.0);
        if (closest) closest->assign(best_n_, best_n_ + m_);
        return best_;
    }

private:
    static constexpr std::size_t kMaxDim = 4;

    void search(std::size_t i, double partial) {
        double shift = 0.0;
        for (std::size_t j = i + 1; j < m_; ++j) shift += r_(i, j) * (x_[j] - static_cast<double>(n_[j]));
        const double rii = r_(i, i);
        const double center = x_[i] + shift / rii;
        const double room = best_ - partial;
        if (room < 0) return;
        const double half = std::sqrt(room) / rii;
        const long lo = static_cast<long>(std::ceil(center - half));
        const long hi = static_cast<long>(std::floor(center + half));
        for (long v = lo; v <= hi; ++v) {
            const double t = rii * (center - static_cast<double>(v));
            const double p = partial + t * t;
            if (p > best_) continue;
            n_[i] = v;
            if (i == 0) {
                best_ = p;
                std::copy(n_, n_ + m_, best_n_);
            } else {
                search(i - 1, p);
            }
        }
    }

    const Matrix& gram_;
    Matrix r_;
    std::size_t m_;
    const double* x_ = nullptr;
    long n_[kMaxDim] = {};
    long best_n_[kMaxDim] = {};
    double best_ = 0.0;
};

} // namespace

double closest_lattice_distance_squared(const Matrix& gram, std::span<const double> x, std::vector<long>* closest) {
    ClosestLattice cvp(gram);
    return cvp(x, closest);
}

DiameterEstimate torus_diameter(const LieGroup& g, const MetricSpec& spec, std::size_t grid_resolution) {
    if (g.kind() != GroupKind::Torus) throw ValidationError("torus_diameter requires a torus");
    const std::size_t m = g.dim();
    if (m > 3) throw ValidationError("torus_diameter supports m <= 3");
    if (spec.dim() != m) throw ValidationError("torus_diameter: metric dimension mismatch");
    if (grid_resolution < 2) throw ValidationError("grid resolution must be at least 2");
    const Matrix& gram = spec.gram();
    ClosestLattice cvp(gram);
    const double h = 1.0 / static_cast<double>(grid_resolution);

    std::vector<std::size_t> idx(m, 0);
    std::vector<double> values;
    std::vector<Vector> points;
    Vector x(m);
    while (true) {
        for (std::size_t i = 0; i < m; ++i) x[i] = static_cast<double>(idx[i]) * h;
        values.push_back(cvp(x));
        points.push_back(x);
        std::size_t i = 0;
        while (i < m && idx[i] == grid_resolution - 1) idx[i++] = 0;
        if (i == m) break;
        ++idx[i];
    }
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t top = std::min<std::size_t>(256, order.size());
    std::partial_sort(order.begin(), order.begin() + top, order.end(),
                      [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const double grid_best2 = values[order[0]];

    // a few well separated grid maxima
    auto cell_gap = [&](const Vector& a, const Vector& b) {
        double gap = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = std::abs(a[i] - b[i]);
            gap = std::max(gap, std::min(d, 1.0 - d));
        }
        return gap / h;
    };
    std::vector<Vector> seeds;
    for (std::size_t k = 0; k < top && seeds.size() < 4; ++k) {
        const Vector& p = points[order[k]];
        if (std::all_of(seeds.begin(), seeds.end(), [&](const Vector& s) { return cell_gap(s, p) > 2.5; }))
            seeds.push_back(p);
    }

    double best2 = grid_best2;
    Vector refined = points[order[0]];
    auto consider = [&](const Vector& y) {
        const double d2 = cvp(y);
        if (d2 > best2) {
            best2 = d2;
            refined = y;
        }
        return d2;
    };
    constexpr int kSub = 8;
    for (const Vector& seed : seeds) {
        // refinement pass: spacing h/8 over the surrounding cell block
        double local2 = -1.0;
        Vector local = seed;
        std::vector<int> off(m, -kSub);
        while (true) {
            for (std::size_t i = 0; i < m; ++i) x[i] = seed[i] + static_cast<double>(off[i]) * h / kSub;
            const double d2 = consider(x);
            if (d2 > local2) {
                local2 = d2;
                local = x;
            }
            std::size_t i = 0;
            while (i < m && off[i] == kSub) off[i++] = -kSub;
            if (i == m) break;
            ++off[i];
        }
        // the maximum sits at a Voronoi vertex: snap to the point equidistant
        // from the m+1 nearest lattice points
        std::vector<std::pair<double, Vector>> near;
        std::vector<int> box(m, -2);
        while (true) {
            Vector n(m), d(m);
            for (std::size_t i = 0; i < m; ++i) {
                n[i] = std::floor(local[i]) + box[i];
                d[i] = local[i] - n[i];
            }
            near.emplace_back(quadratic_form(gram, d), n);
            std::size_t i = 0;
            while (i < m && box[i] == 2) box[i++] = -2;
            if (i == m) break;
            ++box[i];
        }
        std::partial_sort(near.begin(), near.begin() + m + 1, near.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
        const Vector& p0 = near[0].second;
        Matrix lhs(m, m);
        Vector rhs(m);
        for (std::size_t r = 0; r < m; ++r) {
            const Vector& pi = near[r + 1].second;
            Vector diff(m);
            for (std::size_t i = 0; i < m; ++i) diff[i] = pi[i] - p0[i];
            const Vector gd = gram * diff;
            for (std::size_t i = 0; i < m; ++i) lhs(r, i) = 2.0 * gd[i];
            rhs[r] = quadratic_form(gram, pi) - quadratic_form(gram, p0);
        }
        try {
            consider(inverse(lhs) * rhs);
        } catch (const SingularMatrixError&) {
        }
    }

    // worst distance from any point to its nearest grid point
    double slack2 = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        Vector d(m);
        for (std::size_t i = 0; i < m; ++i) d[i] = ((mask >> i) & 1 ? 0.5 : -0.5) * h;
        slack2 = std::max(slack2, quadratic_form(gram, d));
    }

    DiameterEstimate est;
    est.method = DiameterMethod::TorusCoveringRadius;
    est.grid_resolution = grid_resolution;
    est.value = std::sqrt(best2);
    est.lower = est.value;
    est.upper = std::max(est.value, std::sqrt(grid_best2) + std::sqrt(slack2));
    for (auto& c : refined) c -= std::floor(c);
    est.farthest_point = GroupElement{refined};
    return est;
}

// --- bi-invariant -------------------------------------------------------------

double biinvariant_distance(const LieGroup& g, const GroupElement& a) {
    check_element(g, a);
    switch (g.kind()) {
    case GroupKind::Torus:
    case GroupKind::SU2:
    case GroupKind::SO3: return norm(group_log(g, a).value);
    case GroupKind::Product: {
        double s = 0.0;
        for (std::size_t f = 0; f < g.factors().size(); ++f) {
            const double d = biinvariant_distance(g.factors()[f], a.parts()[f]);
            s += d * d;
        }
        return std::sqrt(s);
    }
    }
    throw ValidationError("unknown group kind");
}

DiameterEstimate biinvariant_diameter(const LieGroup& g) {
    DiameterEstimate est;
    est.method = DiameterMethod::BiInvariantClosedForm;
    switch (g.kind()) {
    case GroupKind::Torus:
        est.value = std::sqrt(static_cast<double>(g.dim())) / 2.0;
        est.farthest_point = GroupElement{Vector(g.dim(), 0.5)};
        break;
    case GroupKind::SU2:
        est.value = kPi;
        est.farthest_point = GroupElement{-Quaternion::identity()};
        break;
    case GroupKind::SO3:
        est.value = kPi / 2.0;
        est.farthest_point = GroupElement{Quaternion{0.0, 1.0, 0.0, 0.0}};
        break;
    case GroupKind::Product: {
        double s = 0.0;
        std::vector<GroupElement> parts;
        for (const auto& f : g.factors()) {
            const DiameterEstimate fe = biinvariant_diameter(f);
            s += fe.value * fe.value;
            parts.push_back(*fe.farthest_point);
        }
        est.value = std::sqrt(s);
        est.farthest_point = GroupElement{std::move(parts)};
        break;
    }
    }
    est.lower = est.upper = est.value;
    return est;
}

// --- nets -----------------------------------------------------------------

namespace {

void require_net_group(const LieGroup& g) {
    if (g.kind() != GroupKind::SU2 && g.kind() != GroupKind::SO3)
        throw ValidationError("nets are available for su2 and so3 only");
}

/// Similarity on S³ (SU2) or on S³/± (SO3): larger means closer.
double closeness(GroupKind kind, const Quaternion& a, const Quaternion& b) {
    const double d = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
    return kind == GroupKind::SO3 ? std::abs(d) : d;
}

double angle_from_closeness(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

/// k most similar other nodes for each node, brute force, threaded by row blocks.
std::vector<std::vector<std::uint32_t>> knn_lists(GroupKind kind, const std::vector<Quaternion>& nodes, std::size_t k) {
    const std::size_t n = nodes.size();
    k = std::min(k, n - 1);
    std::vector<std::vector<std::uint32_t>> out(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<std::pair<double, std::uint32_t>> best;
        for (std::size_t i = begin; i < end; ++i) {
            best.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double c = closeness(kind, nodes[i], nodes[j]);
                if (best.size() < k) {
                    best.emplace_back(c, static_cast<std::uint32_t>(j));
                    std::push_heap(best.begin(), best.end(), std::greater<>());
                } else if (c > best.front().first) {
                    std::pop_heap(best.begin(), best.end(), std::greater<>());
                    best.back() = {c, static_cast<std::uint32_t>(j)};
                    std::push_heap(best.begin(), best.end(), std::greater<>());
                }
            }
            std::sort(best.begin(), best.end(), std::greater<>());
            out[i].reserve(best.size());
            for (const auto& [c, j] : best) out[i].push_back(j);
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
    return out;
}

std::vector<std::vector<std::uint32_t>> symmetrize(const std::vector<std::vector<std::uint32_t>>& lists) {
    std::vector<std::vector<std::uint32_t>> adj(lists.size());
    for (std::size_t i = 0; i < lists.size(); ++i)
        for (auto j : lists[i]) {
            adj[i].push_back(j);
            adj[j].push_back(static_cast<std::uint32_t>(i));
        }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

std::vector<char> reachable_from_zero(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return seen;
}

std::array<double, 3> log3(const Quaternion& q) { return quaternion_log(q); }

std::vector<std::vector<std::uint32_t>> two_hop(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::vector<std::vector<std::uint32_t>> out(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) {
        auto& o = out[i];
        for (auto j : adj[i]) {
            o.push_back(j);
            for (auto k : adj[j])
                if (k != i) o.push_back(k);
        }
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
    }
    return out;
}

/// CSR arrays, left-trivialized edge logs and the mesh.
void set_edges(Net& net, const std::vector<std::vector<std::uint32_t>>& adj) {
    const std::size_t n = net.size();
    net.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) net.offsets[i + 1] = net.offsets[i] + adj[i].size();
    net.targets.clear();
    net.edge_log.clear();
    net.edge_log_alt.clear();
    net.targets.reserve(net.offsets[n]);
    net.edge_log.reserve(net.offsets[n]);
    double mesh = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double nearest = kPi;
        const Quaternion pinv = net.nodes[i].conj();
        for (auto j : adj[i]) {
            net.targets.push_back(j);
            Quaternion r = pinv * net.nodes[j];
            if (net.kind == GroupKind::SO3) {
                if (r.w < 0) r = -r;
                net.edge_log.push_back(log3(r));
                net.edge_log_alt.push_back(log3(-r));
            } else {
                net.edge_log.push_back(log3(r));
            }
            nearest = std::min(nearest, angle_from_closeness(closeness(net.kind, net.nodes[i], net.nodes[j])));
        }
        mesh = std::max(mesh, nearest);
    }
    net.mesh = mesh;
}

} // namespace

Net net_from_nodes(const LieGroup& g, std::vector<Quaternion> nodes, std::size_t knn, std::uint64_t seed) {
    require_net_group(g);
    if (nodes.size() < 100) throw ValidationError("net needs at least 100 nodes");
    if (knn < 6) throw ValidationError("net needs knn >= 6");
    for (const auto& q : nodes)
        if (std::abs(q.norm() - 1.0) > 1e-12) throw ValidationError("net node is not a unit quaternion");

    Net net;
    net.kind = g.kind();
    net.knn = knn;
    net.seed = seed;
    net.nodes = std::move(nodes);
    const std::size_t n = net.size();

    auto adj = symmetrize(knn_lists(net.kind, net.nodes, knn));

    // repair connectivity by joining the closest cross-component pair
    for (std::size_t repairs = 0;; ++repairs) {
        const auto seen = reachable_from_zero(adj);
        if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) break;
        if (repairs > n) throw ComputationError("net is disconnected after repair");
        double best = -2.0;
        std::size_t bu = 0, bv = 0;
        for (std::size_t u = 0; u < n; ++u) {
            if (!seen[u]) continue;
            for (std::size_t v = 0; v < n; ++v) {
                if (seen[v]) continue;
                const double c = closeness(net.kind, net.nodes[u], net.nodes[v]);
                if (c > best) {
                    best = c;
                    bu = u;
                    bv = v;
                }
            }
        }
        adj[bu].push_back(static_cast<std::uint32_t>(bv));
        adj[bv].push_back(static_cast<std::uint32_t>(bu));
    }

    // neighbours of neighbours as well: paths zig-zag much less, and the edge
    // set stays independent of the metric
    set_edges(net, two_hop(adj));
    return net;
}

Net build_net(const LieGroup& g, std::size_t n_nodes, std::size_t knn, std::uint64_t seed) {
    require_net_group(g);
    if (n_nodes < 100) throw ValidationError("net needs at least 100 nodes");
    if (knn < 6) throw ValidationError("net needs knn >= 6");
    // super-Fibonacci spiral (Alexa 2022)
    const double phi = std::sqrt(2.0);
    const double psi = 1.533751168755204288118041;
    std::vector<Quaternion> raw(n_nodes);
    const double nd = static_cast<double>(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double s = static_cast<double>(i) + 0.5;
        const double r = std::sqrt(s / nd);
        const double big_r = std::sqrt(1.0 - s / nd);
        const double alpha = 2.0 * kPi * s / phi;
        const double beta = 2.0 * kPi * s / psi;
        raw[i] = Quaternion{r * std::sin(alpha), r * std::cos(alpha), big_r * std::sin(beta), big_r * std::cos(beta)};
    }
    // left-translate node 0 to the identity, then conjugate by a seeded rotation
    Rng rng(seed);
    Quaternion c{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    const double cn = c.norm();
    c = {c.w / cn, c.x / cn, c.y / cn, c.z / cn};
    const Quaternion base = raw[0].conj();
    std::vector<Quaternion> nodes(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        Quaternion q = c * (base * raw[i]) * c.conj();
        const double qn = q.norm();
        q = {q.w / qn, q.x / qn, q.y / qn, q.z / qn};
        nodes[i] = g.kind() == GroupKind::SO3 ? so3_canonical(q) : q;
    }
    nodes[0] = Quaternion::identity();
    return net_from_nodes(g, std::move(nodes), knn, seed);
}

void save_net_nodes(const Net& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write net cache '" + path + "'");
    out << net.size() << '\n';
    out.precision(17);
    for (const auto& q : net.nodes) out << q.w << ' ' << q.x << ' ' << q.y << ' ' << q.z << '\n';
}

std::vector<Quaternion> load_net_nodes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open net cache '" + path + "'");
    std::size_t n = 0;
    if (!(in >> n) || n == 0) throw ValidationError("net cache: bad node count");
    std::vector<Quaternion> nodes(n);
    for (auto& q : nodes) {
        if (!(in >> q.w >> q.x >> q.y >> q.z)) throw ValidationError("net cache: truncated node list");
        if (!std::isfinite(q.w) || !std::isfinite(q.x) || !std::isfinite(q.y) || !std::isfinite(q.z))
            throw ValidationError("net cache: non-finite entry");
        const double qn = q.norm();
        q = {q.w / qn, q.x / qn, q.y / qn, q.z / qn};
    }
    return nodes;
}

Net cached_net(const LieGroup& g, std::size_t n_nodes, std::size_t knn, std::uint64_t seed) {
    const char* dir = std::getenv("LIESPEC_NET_CACHE");
    if (!dir || !*dir) return build_net(g, n_nodes, knn, seed);
    namespace fs = std::filesystem;
    const fs::path file = fs::path(dir) / ("net_" + g.key() + "_" + std::to_string(n_nodes) + "_" +
                                           std::to_string(seed) + ".txt");
    if (fs::exists(file)) return net_from_nodes(g, load_net_nodes(file.string()), knn, seed);
    Net net = build_net(g, n_nodes, knn, seed);
    std::error_code ec;
    fs::create_directories(dir, ec);
    save_net_nodes(net, file.string());
    return net;
}

namespace {

template <typename Weight>
std::vector<double> dijkstra(const Net& net, Weight&& weight) {
    const std::size_t n = net.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[0] = 0.0;
    pq.emplace(0.0, 0);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (std::size_t e = net.offsets[u]; e < net.offsets[u + 1]; ++e) {
            const double w = weight(e);
            if (!std::isfinite(w)) continue;
            const auto v = net.targets[e];
            const double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    return dist;
}

double form3(const Matrix& q, const std::array<double, 3>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s += v[i] * q(i, j) * v[j];
    return s;
}

void require_matching_net(const LieGroup& g, const Net& net) {
    require_net_group(g);
    if (net.kind != g.kind()) throw ValidationError("net/group mismatch");
    if (net.size() == 0) throw ValidationError("empty net");
}

DiameterEstimate farthest(const Net& net, const std::vector<double>& dist, DiameterMethod method) {
    DiameterEstimate est;
    est.method = method;
    est.net_size = net.size();
    est.knn = net.knn;
    std::size_t arg = 0, unreachable = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (!std::isfinite(dist[i])) {
            ++unreachable;
            continue;
        }
        if (dist[i] > dist[arg]) arg = i;
    }
    est.value = dist[arg];
    est.farthest_point = GroupElement{net.nodes[arg]};
    if (unreachable) est.notes = std::to_string(unreachable) + " nodes unreachable";
    return est;
}

} // namespace

std::vector<double> net_distances(const Net& net, const Matrix& q) {
    if (q.rows() != 3 || q.cols() != 3) throw ValidationError("net_distances: form must be 3x3");
    if (net.kind == GroupKind::SO3)
        return dijkstra(net, [&](std::size_t e) {
            return std::sqrt(std::max(0.0, std::min(form3(q, net.edge_log[e]), form3(q, net.edge_log_alt[e]))));
        });
    return dijkstra(net, [&](std::size_t e) { return std::sqrt(std::max(0.0, form3(q, net.edge_log[e]))); });
}

namespace {

/// Dijkstra where relaxing u→v also tries the straight segment from u's tree
/// parent. weight(v) maps a left-trivialized log to a length (∞ = forbidden).
template <typename Weight>
std::vector<double> any_angle_dijkstra(const Net& net, Weight&& weight) {
    const std::size_t n = net.size();
    auto branch_min = [&](const std::array<double, 3>& v, const std::array<double, 3>* alt) {
        const double w = weight(v);
        return alt ? std::min(w, weight(*alt)) : w;
    };
    auto segment = [&](std::uint32_t a, std::uint32_t b) {
        const Quaternion r = net.nodes[a].conj() * net.nodes[b];
        const auto v = quaternion_log(r);
        if (net.kind != GroupKind::SO3) return weight(v);
        const auto alt = quaternion_log(-r);
        return branch_min(v, &alt);
    };
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::uint32_t> parent(n, 0);
    std::vector<char> settled(n, 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[0] = 0.0;
    pq.emplace(0.0, 0);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        const std::uint32_t a = parent[u];
        for (std::size_t e = net.offsets[u]; e < net.offsets[u + 1]; ++e) {
            const auto v = net.targets[e];
            if (settled[v]) continue;
            double best = d + branch_min(net.edge_log[e], net.kind == GroupKind::SO3 ? &net.edge_log_alt[e] : nullptr);
            std::uint32_t via = u;
            if (a != u) {
                // straight segment from u's parent, skipping the corner at u
                const double direct = dist[a] + segment(a, v);
                if (direct < best) {
                    best = direct;
                    via = a;
                }
            }
            if (best < dist[v]) {
                dist[v] = best;
                parent[v] = via;
                pq.emplace(best, v);
            }
        }
    }
    return dist;
}

} // namespace

std::vector<double> net_distances_any_angle(const Net& net, const Matrix& q) {
    if (q.rows() != 3 || q.cols() != 3) throw ValidationError("net_distances: form must be 3x3");
    return any_angle_dijkstra(net, [&](const std::array<double, 3>& v) { return std::sqrt(std::max(0.0, form3(q, v))); });
}

DiameterEstimate graph_diameter(const LieGroup& g, const MetricSpec& spec, const Net& net, double eps_net,
                                bool any_angle) {
    require_matching_net(g, net);
    if (spec.dim() != 3) throw ValidationError("graph_diameter: metric dimension mismatch");
    if (!(eps_net >= 0.0 && eps_net < 1.0)) throw ValidationError("eps_net must lie in [0, 1)");
    const auto dist = any_angle ? net_distances_any_angle(net, spec.gram()) : net_distances(net, spec.gram());
    DiameterEstimate est = farthest(net, dist, DiameterMethod::GeodesicGraph);
    est.upper = est.value;
    est.lower = est.value * (1.0 - eps_net);
    if (!any_angle) est.notes = "fixed edge set";
    return est;
}

DiameterEstimate horizontal_graph_diameter(const LieGroup& g, std::span<const Vector> h_basis, const Matrix& h,
                                           const Net& net, const HorizontalOptions& options) {
    require_matching_net(g, net);
    const std::size_t m = g.dim();
    const std::size_t r = h_basis.size();
    if (r == 0) throw ValidationError("horizontal distribution basis is empty");
    if (h.rows() != r || h.cols() != r) throw ValidationError("Gram matrix size does not match distribution basis");
    if (!(options.eta > 0.0 && options.eta < 1.0)) throw ValidationError("eta must lie in (0, 1)");
    if (options.n_directions < 6) throw ValidationError("n_directions must be at least 6");
    Matrix b(m, r);
    for (std::size_t c = 0; c < r; ++c) {
        if (h_basis[c].size() != m) throw ValidationError("distribution vector length mismatch");
        b.set_column(c, h_basis[c]);
    }
    if (numerical_rank(b, kRankTolerance) != r) throw ValidationError("distribution basis is linearly dependent");
    if (!is_bracket_generating(g, h_basis)) throw ValidationError("distribution is not bracket generating");

    const Matrix btb_inv = inverse(b.transpose() * b);
    const Matrix proj = b * btb_inv * b.transpose();                   // g_I-orthogonal projection onto H
    const Matrix hform = b * btb_inv * h * btb_inv * b.transpose();   // v ↦ ‖v_H‖_h²
    const Matrix perp = Matrix::identity(m) - proj;
    const Matrix weight_form = hform + perp * (1.0 / (options.eta * options.eta));

    // candidate edges: n_directions nearest neighbours, symmetrized
    Net cand;
    cand.kind = net.kind;
    cand.nodes = net.nodes;
    cand.knn = options.n_directions;
    set_edges(cand, symmetrize(knn_lists(net.kind, net.nodes, options.n_directions)));

    const double eta2 = options.eta * options.eta;
    auto admissible_weight = [&](const std::array<double, 3>& v) {
        const double total = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        const double off = form3(perp, v);
        if (off > eta2 * total) return std::numeric_limits<double>::infinity();
        return std::sqrt(std::max(0.0, form3(weight_form, v)));
    };
    const auto dist = any_angle_dijkstra(cand, admissible_weight);
    DiameterEstimate est = farthest(cand, dist, DiameterMethod::HorizontalGraph);
    est.net_size = net.size();
    est.knn = options.n_directions;
    est.heuristic = true;
    est.lower = 0.0;
    est.upper = std::numeric_limits<double>::infinity();
    if (est.notes.empty()) est.notes = "heuristic: no certified bracket";
    else est.notes += "; heuristic: no certified bracket";
    return est;
}

DiameterBounds analytic_diameter_bounds(const LieGroup& g, const MetricSpec& spec) {
    if (spec.dim() != g.dim()) throw ValidationError("bounds: metric dimension mismatch");
    if (g.kind() == GroupKind::SU2)
        return {{kPi / 2.0 / spec.sigma_k(2), "SU(2) explicit: (pi/2)/sigma_2"},
                {kPi / spec.sigma_k(2), "SU(2) explicit: pi/sigma_2"}};
    if (g.kind() == GroupKind::SO3)
        return {{kPi / 2.0 / spec.sigma_k(2), "SO(3) explicit: (pi/2)/sigma_2"},
                {std::sqrt(3.0) * kPi / 2.0 / spec.sigma_k(2), "SO(3) explicit: (sqrt(3)pi/2)/sigma_2"}};
    const double d0 = biinvariant_diameter(g).value;
    return {{d0 / spec.sigma_max(), "simple estimate: diam(g_I)/sigma_1"},
            {d0 / spec.sigma_min(), "simple estimate: diam(g_I)/sigma_m"}};
}

} // namespace liespec
