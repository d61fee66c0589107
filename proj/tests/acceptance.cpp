// One line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "liespec/egs_scan.hpp"

using namespace liespec;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-9;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

std::string str(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// |j, m⟩ angular momentum matrices; π(X_a) = −2i J_a
std::vector<CMatrix> spin_oracle(int twice_j) {
    const double j = twice_j / 2.0;
    const std::size_t d = twice_j + 1;
    CMatrix jz(d, d), jp(d, d), jm(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double m = j - static_cast<double>(k);
        jz(k, k) = m;
        if (k > 0) {
            jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
            jm(k, k - 1) = jp(k - 1, k);
        }
    }
    CMatrix jx = jp + jm;
    jx *= Complex(0.5, 0);
    CMatrix jy = jp - jm;
    jy *= Complex(0, -0.5);
    std::vector<CMatrix> out{jx, jy, jz};
    for (auto& x : out) x *= Complex(0, -2);
    return out;
}

// Σ q_ij ρ_i ρ_j
CMatrix quadratic(const std::vector<CMatrix>& rho, const Matrix& q) {
    CMatrix out(rho[0].rows(), rho[0].cols());
    for (std::size_t i = 0; i < rho.size(); ++i)
        for (std::size_t j = 0; j < rho.size(); ++j) {
            CMatrix t = rho[i] * rho[j];
            t *= Complex(q(i, j), 0);
            out += t;
        }
    return out;
}

// shortest nonzero nᵀ Q n over ℤ^m, Fincke–Pohst box |n_i| ≤ sqrt(R (Q⁻¹)_ii)
double shortest_vector(const Matrix& q) {
    const std::size_t m = q.rows();
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) r = std::min(r, q(i, i));
    const Matrix qi = inverse(q);
    std::vector<long> box(m), n(m);
    for (std::size_t i = 0; i < m; ++i) {
        box[i] = static_cast<long>(std::floor(std::sqrt(r * qi(i, i)) + 1e-9));
        n[i] = -box[i];
    }
    double best = r;
    while (true) {
        if (std::any_of(n.begin(), n.end(), [](long v) { return v != 0; })) {
            Vector x(n.begin(), n.end());
            best = std::min(best, quadratic_form(q, x));
        }
        std::size_t i = 0;
        while (i < m && n[i] == box[i]) {
            n[i] = -box[i];
            ++i;
        }
        if (i == m) return best;
        ++n[i];
    }
}

Matrix random_matrix(std::size_t n, Rng& rng) {
    Matrix a(n, n);
    for (double& x : a.data()) x = rng.normal();
    return a;
}

const SamplerConfig kWide{0.2, 5.0, true};

Outcome explicit_eigenvalue_bounds(const LieGroup& g, double lo_factor) {
    Outcome o;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const MetricSpec s = sample_metric(g, kWide, seed);
        const SpectralResult r = lambda1_certified(g, s);
        const double s2 = s.sigma_k(2) * s.sigma_k(2);
        if (!r.certified) o.fail("seed " + std::to_string(seed) + " uncertified");
        if (!(r.lambda1 > lo_factor * s2)) o.fail("seed " + std::to_string(seed) + " lower side: " + str(r.lambda1));
        if (!(r.lambda1 <= 8 * s2 * (1 + kTol))) o.fail("seed " + std::to_string(seed) + " upper side: " + str(r.lambda1));
    }
    return o;
}

Outcome criterion1() { return explicit_eigenvalue_bounds(LieGroup::su2(), 2.0); }

Outcome criterion2() {
    Outcome o = explicit_eigenvalue_bounds(LieGroup::so3(), 4.0);
    const double id = lambda1_certified(LieGroup::so3(), metric_from_matrix(Matrix::identity(3))).lambda1;
    if (std::abs(id - 8.0) > kTol) o.fail("lambda1(I) = " + str(id));
    return o;
}

Outcome criterion3() {
    Outcome o;
    const Net net = cached_net(LieGroup::su2(), 20000, 12, 0);
    DiamConfig cfg;
    cfg.method = DiamMethodChoice::Graph;
    double lo_ratio = 1e9, hi_ratio = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const MetricSpec s = sample_metric(LieGroup::su2(), kWide, seed);
        const double d = estimate_diameter(LieGroup::su2(), s, cfg, &net).value;
        const double r = d * s.sigma_k(2) / kPi;
        lo_ratio = std::min(lo_ratio, r);
        hi_ratio = std::max(hi_ratio, r);
        if (r < 0.5 * 0.90 || r > 1.10) o.fail("seed " + std::to_string(seed) + " diam*sigma2/pi = " + str(r));
    }
    if (o.ok) o.detail = "diam*sigma2/pi in [" + str(lo_ratio) + ", " + str(hi_ratio) + "]";
    return o;
}

Outcome criterion4() {
    Outcome o;
    for (std::size_t m = 2; m <= 3; ++m) {
        const LieGroup g = LieGroup::torus(m);
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const MetricSpec s = sample_metric(g, kWide, seed);
            const SpectralResult r = lambda1_certified(g, s);
            const double oracle = 4 * kPi * kPi * shortest_vector(s.aat());
            if (!r.certified || std::abs(r.lambda1 - oracle) > kTol * oracle)
                o.fail("t" + std::to_string(m) + " seed " + std::to_string(seed) + ": " + str(r.lambda1) + " vs " +
                       str(oracle));
            const DiameterEstimate d = torus_diameter(g, s);
            if (r.lambda1 * d.lower * d.lower < kPi * kPi / 4 - 1e-6)
                o.fail("t" + std::to_string(m) + " seed " + std::to_string(seed) + " Li bound");
        }
        const DiameterEstimate id = torus_diameter(g, metric_from_matrix(Matrix::identity(m)));
        const double exact = std::sqrt(static_cast<double>(m)) / 2;
        if (!(id.lower <= exact + kTol && exact <= id.upper + kTol))
            o.fail("t" + std::to_string(m) + " identity bracket [" + str(id.lower) + ", " + str(id.upper) + "]");
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    const LieGroup su2 = LieGroup::su2();
    const Net net = cached_net(su2, 5000, 12, 0);
    const std::vector<LieGroup> groups{su2, LieGroup::so3(), LieGroup::torus(2), LieGroup::torus(3),
                                       LieGroup::from_key("su2xsu2")};
    Rng rng(2024);
    for (std::size_t t = 0; t < 200; ++t) {
        const LieGroup& g = groups[t % groups.size()];
        const std::size_t m = g.dim();
        // B Bᵀ = A Aᵀ + C Cᵀ
        const MetricSpec a = sample_metric(g, {0.3, 3.0, true}, 1000 + t);
        const Matrix c = random_matrix(m, rng) * 0.5;
        const MetricSpec b = metric_from_matrix(cholesky(a.aat() + c * c.transpose()));
        const double la = lambda1_certified(g, a).lambda1, lb = lambda1_certified(g, b).lambda1;
        if (la > lb * (1 + kTol)) o.fail("pair " + std::to_string(t) + " lambda1 " + str(la) + " > " + str(lb));
        if (g.kind() == GroupKind::SU2) {
            const double da = graph_diameter(su2, a, net, kDefaultNetEpsilon, false).value;
            const double db = graph_diameter(su2, b, net, kDefaultNetEpsilon, false).value;
            if (db > da * (1 + kTol)) o.fail("pair " + std::to_string(t) + " diam " + str(db) + " > " + str(da));
        }
    }
    // the remaining fixed-net pairs
    for (std::size_t t = 0; t < 160; ++t) {
        const MetricSpec a = sample_metric(su2, {0.3, 3.0, true}, 5000 + t);
        const Matrix c = random_matrix(3, rng) * 0.5;
        const MetricSpec b = metric_from_matrix(cholesky(a.aat() + c * c.transpose()));
        const double da = graph_diameter(su2, a, net, kDefaultNetEpsilon, false).value;
        const double db = graph_diameter(su2, b, net, kDefaultNetEpsilon, false).value;
        if (db > da * (1 + kTol)) o.fail("diam pair " + std::to_string(t) + ": " + str(db) + " > " + str(da));
    }
    return o;
}

Outcome criterion6() {
    Outcome o;
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        const MetricSpec a = sample_metric(LieGroup::su2(), kWide, 300 + t);
        const MetricSpec ar = metric_from_matrix(a.a() * random_orthogonal(3, rng));
        const double res = max_abs(ar.gram() - a.gram()) / max_abs(a.gram());
        if (res > kTol) o.fail("g_AR residual " + str(res));
    }
    for (int tj = 1; tj <= 3; ++tj) {
        const auto rho = spin_oracle(tj);
        const Irrep irrep = make_irrep(LieGroup::su2(), IrrepLabel::spin(tj));
        for (int t = 0; t < 20; ++t) {
            const Matrix a = random_matrix(3, rng), b = random_matrix(3, rng);
            // π(X_i(A)) = Σ_k A_ki π(X_k)
            std::vector<CMatrix> rho_a(3, CMatrix(tj + 1, tj + 1));
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k) {
                    CMatrix x = rho[k];
                    x *= Complex(a(k, i), 0);
                    rho_a[i] += x;
                }
            const Matrix ab = a * b;
            const CMatrix lhs = quadratic(rho_a, b * b.transpose());
            const CMatrix rhs = quadratic(rho, ab * ab.transpose());
            const double scale = std::max(1.0, max_abs(rhs));
            const double res = max_abs(lhs - rhs) / scale;
            const double lib = cab_identity_residual(irrep, a, b) / scale;
            if (res > 1e-10 || lib > 1e-10) o.fail("C_AB spin " + std::to_string(tj) + "/2: " + str(std::max(res, lib)));
        }
    }
    for (const std::string key : {"su2", "so3", "t2", "t3", "su2xsu2"}) {
        const LieGroup g = LieGroup::from_key(key);
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const MetricSpec s = sample_metric(g, kWide, 700 + seed);
            double tr = 0;
            for (std::size_t i = 0; i < g.dim(); ++i) tr += s.aat()(i, i);
            const double l = lambda1_certified(g, s).lambda1;
            if (l > lambda1_reference(g) * tr * (1 + kTol)) o.fail(key + " Urakawa seed " + std::to_string(seed));
        }
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    const LieGroup su2 = LieGroup::su2();
    const Matrix id = Matrix::identity(3);
    const RestrictedSpectrum r2 = lambda1_restricted(su2, id, 2);
    if (r2.infinite || std::abs(r2.value - 8.0) > kTol) o.fail("restricted(I, 2) = " + str(r2.value));
    const RestrictedSpectrum r3 = lambda1_restricted(su2, id, 3);
    if (!r3.infinite) o.fail("restricted(I, 3) not flagged infinite");
    Rng rng(7);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        // P = I on even seeds, a random rotation on odd ones
        const Matrix p = seed % 2 ? random_rotation(3, rng) : id;
        const MetricSpec s = class_build(su2, DiagonalClass{p}, {kWide}, seed);
        const double bound = lambda1_restricted(su2, p, 2).value * s.sigma_k(2) * s.sigma_k(2);
        const double l = lambda1_certified(su2, s).lambda1;
        if (l > bound * (1 + kTol)) o.fail("seed " + std::to_string(seed) + ": " + str(l) + " > " + str(bound));
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    const LieGroup su2 = LieGroup::su2();
    const Net net = cached_net(su2, 20000, 12, 0);
    DiamConfig cfg;
    const DegenerationReport sh = degeneration_experiment(
        su2, DegenerationKind::ShrinkTransverseToSubgroup, {1, 0.5, 0.25, 0.125}, cfg, &net);
    if (!sh.lambda1_strictly_decreasing) o.fail("lambda1 not strictly decreasing");
    if (!sh.diam_strictly_increasing) o.fail("diameter not strictly increasing");
    const std::size_t n = sh.rows.size();
    const double q1 = sh.rows[n - 2].lambda1 / (sh.rows[n - 2].s * sh.rows[n - 2].s);
    const double q2 = sh.rows[n - 1].lambda1 / (sh.rows[n - 1].s * sh.rows[n - 1].s);
    if (std::abs(q1 - q2) >= 0.25 * std::max(q1, q2)) o.fail("lambda1/s^2 varies: " + str(q1) + " vs " + str(q2));
    const DegenerationReport dl = degeneration_experiment(LieGroup::torus(2), DegenerationKind::TorusDenseLine,
                                                          default_s_values(DegenerationKind::TorusDenseLine), cfg);
    if (!dl.tracked_strictly_decreasing) o.fail("diam*sigma_2 not strictly decreasing on T^2");
    return o;
}

Outcome criterion9() {
    Outcome o;
    if (LieGroup::su2().k_max() != 2) o.fail("k_max(SU2)");
    for (std::size_t m = 1; m <= 4; ++m)
        if (LieGroup::torus(m).k_max() != m) o.fail("k_max(T^" + std::to_string(m) + ")");
    if (LieGroup::from_key("su2xsu2").k_max() != 5) o.fail("k_max(SU2xSU2)");
    if (su_n_k_max(2) != 2) o.fail("n^2-2n+2 at n=2");
    try {
        check_k_max_catalog();
    } catch (const std::exception& e) {
        o.fail(e.what());
    }
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* text;
        std::function<Outcome()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {"SU(2): 2 sigma_2^2 < lambda1 <= 8 sigma_2^2 on 100 metrics", criterion1, 60},
        {"SO(3): 4 sigma_2^2 < lambda1 <= 8 sigma_2^2 on 100 metrics, lambda1(I) = 8", criterion2, 60},
        {"SU(2): graph diameter within [0.9 pi/(2 sigma_2), 1.1 pi/sigma_2] on 30 metrics", criterion3, 600},
        {"tori: lambda1 = 4 pi^2 shortest vector, identity bracket, Li bound", criterion4, 0},
        {"200 Loewner pairs: lambda1 monotone; SU(2) fixed-net diameter monotone", criterion5, 0},
        {"g_AR = g_A, C_AB identity, Urakawa bound", criterion6, 0},
        {"restricted spectrum 8 / infinite, sandwich on 50 metrics", criterion7, 0},
        {"degeneration trends on SU(2) and T^2", criterion8, 0},
        {"k_max catalog", criterion9, 0},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (criteria[i].budget_s > 0 && secs > criteria[i].budget_s)
            o.fail("took " + str(secs) + " s, budget " + str(criteria[i].budget_s) + " s");
        if (!o.ok) ++failures;
        std::printf("[%s] %zu %s (%.1f s)%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].text, secs,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
