#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "liespec/rep_theory.hpp"

using namespace liespec;

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

// textbook angular momentum matrices in the |j, m⟩ basis, m = j, j-1, ..., -j
std::vector<CMatrix> angular_momentum(int twice_j) {
    const double j = twice_j / 2.0;
    const std::size_t d = twice_j + 1;
    CMatrix jz(d, d), jp(d, d), jm(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double m = j - static_cast<double>(k);
        jz(k, k) = m;
        if (k > 0) {
            // ⟨m+1| J+ |m⟩
            jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
            jm(k, k - 1) = jp(k - 1, k);
        }
    }
    CMatrix jx = jp + jm;
    jx *= Complex(0.5, 0);
    CMatrix jy = jp - jm;
    jy *= Complex(0, -0.5);
    return {jx, jy, jz};
}

// −Σ (A Aᵀ)_ab π(X_a) π(X_b) with π(X_a) = −2i J_a
CMatrix oracle_operator(int twice_j, const Matrix& aat) {
    const auto jm = angular_momentum(twice_j);
    CMatrix out(twice_j + 1, twice_j + 1);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            CMatrix t = jm[a] * jm[b];
            t *= Complex(4.0 * aat(a, b), 0);
            out += t;
        }
    return out;
}

double oracle_su2_lambda1(const MetricSpec& spec, int step) {
    double best = std::numeric_limits<double>::infinity();
    const double smin2 = spec.sigma_min() * spec.sigma_min();
    for (int tj = step;; tj += step) {
        if (smin2 * tj * (tj + 2) > best) return best;
        best = std::min(best, lambda_min_hermitian(oracle_operator(tj, spec.aat())));
    }
}

double oracle_shortest_vector(const Matrix& q, int box) {
    const std::size_t m = q.rows();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> n(m, -box);
    while (true) {
        Vector x(n.begin(), n.end());
        if (std::any_of(n.begin(), n.end(), [](int v) { return v != 0; })) best = std::min(best, quadratic_form(q, x));
        std::size_t i = 0;
        while (i < m && n[i] == box) n[i++] = -box;
        if (i == m) return best;
        ++n[i];
    }
}

} // namespace

TEST_CASE("spin generators agree with the textbook matrices up to basis") {
    for (int tj = 1; tj <= 6; ++tj) {
        const auto gens = spin_generators(tj);
        const auto jm = angular_momentum(tj);
        const double j = tj / 2.0;
        for (int a = 0; a < 3; ++a) {
            // spectrum of π(X_a) is −2i m
            CMatrix h = (*gens)[a];
            h *= Complex(0, 0.5);
            Vector ev = hermitian_eigenvalues(h);
            std::sort(ev.begin(), ev.end());
            for (int k = 0; k <= tj; ++k) CHECK(ev[k] == doctest::Approx(-j + k).epsilon(1e-12));
            for (int b = 0; b < 3; ++b) {
                const Complex lib = trace((*gens)[a] * (*gens)[b]);
                const Complex ref = trace(jm[a] * jm[b]) * Complex(-4.0, 0);
                CHECK(std::abs(lib - ref) < 1e-10);
            }
        }
        // [π(X1), π(X2)] = 2 π(X3)
        CMatrix comm = (*gens)[0] * (*gens)[1] - (*gens)[1] * (*gens)[0];
        CMatrix rhs = (*gens)[2];
        rhs *= Complex(2.0, 0);
        CHECK(max_abs(comm - rhs) < 1e-12);
    }
}

TEST_CASE("Casimir values") {
    const LieGroup su2 = LieGroup::su2();
    for (int tj = 1; tj <= 5; ++tj) {
        const Irrep r = make_irrep(su2, IrrepLabel::spin(tj));
        CHECK(r.casimir == doctest::Approx(tj * (tj + 2.0)));
        CHECK(r.dim == static_cast<std::size_t>(tj + 1));
        CMatrix c = assemble_minus_ca(r, Matrix::identity(3));
        CHECK(max_abs(c - to_complex(Matrix::identity(r.dim)) * Complex(r.casimir, 0)) < 1e-10);
    }
    CHECK_THROWS_AS(make_irrep(LieGroup::so3(), IrrepLabel::spin(1)), ValidationError);
    const Irrep chi = make_irrep(LieGroup::torus(2), IrrepLabel::chi({1, -2}));
    CHECK(chi.casimir == doctest::Approx(kFourPiSq * 5));
}

TEST_CASE("irrep streams are sorted by Casimir") {
    for (const std::string key : {"su2", "so3", "t2", "t3", "su2xsu2"}) {
        IrrepStream s(LieGroup::from_key(key));
        double prev = 0.0;
        for (int i = 0; i < 60; ++i) {
            const Irrep r = s.next();
            CHECK(r.casimir >= prev);
            CHECK_FALSE(r.label.trivial());
            prev = r.casimir;
        }
    }
    CHECK(enumerate_irreps(LieGroup::su2(), 15.0).size() == 3);
    CHECK(enumerate_irreps(LieGroup::so3(), 24.0).size() == 2);
    // T²: (±1,0), (0,±1) at 4π², then the four (±1,±1)
    CHECK(enumerate_irreps(LieGroup::torus(2), kFourPiSq * 2.0).size() == 8);
}

TEST_CASE("identity metric") {
    const SpectralResult su2 = lambda1_certified(LieGroup::su2(), metric_from_matrix(Matrix::identity(3)));
    CHECK(su2.lambda1 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(su2.witness == IrrepLabel::spin(1));
    CHECK(su2.certified);
    const SpectralResult so3 = lambda1_certified(LieGroup::so3(), metric_from_matrix(Matrix::identity(3)));
    CHECK(so3.lambda1 == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(so3.witness == IrrepLabel::spin(2));
    CHECK(lambda1_reference(LieGroup::torus(3)) == doctest::Approx(kFourPiSq));
    CHECK(lambda1_reference(LieGroup::from_key("su2xsu2")) == doctest::Approx(3.0));
}

TEST_CASE("SU(2) and SO(3) against the assembled oracle") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const MetricSpec s = sample_metric(LieGroup::su2(), {0.3, 3.0, true}, seed);
        const SpectralResult r = lambda1_certified(LieGroup::su2(), s);
        CHECK(r.certified);
        CHECK(r.lambda1 == doctest::Approx(oracle_su2_lambda1(s, 1)).epsilon(1e-10));
        CHECK(s.sigma_min() * s.sigma_min() * r.window > r.lambda1);
        const SpectralResult q = lambda1_certified(LieGroup::so3(), s);
        CHECK(q.lambda1 == doctest::Approx(oracle_su2_lambda1(s, 2)).epsilon(1e-10));
    }
}

TEST_CASE("diagonal SU(2) metric: spin 1/2 and spin 1 closed forms") {
    const double a1 = 4.0, a2 = 1.0, a3 = 0.25; // σ²
    const MetricSpec s = metric_from_matrix(Matrix{{2, 0, 0}, {0, 1, 0}, {0, 0, 0.5}});
    const Irrep half = make_irrep(LieGroup::su2(), IrrepLabel::spin(1));
    CHECK(lambda_min_hermitian(assemble_minus_ca(half, s)) == doctest::Approx(a1 + a2 + a3));
    const Irrep one = make_irrep(LieGroup::su2(), IrrepLabel::spin(2));
    CHECK(lambda_min_hermitian(assemble_minus_ca(one, s)) == doctest::Approx(4 * (a2 + a3)));
    CHECK(lambda1_certified(LieGroup::su2(), s).lambda1 == doctest::Approx(std::min(a1 + a2 + a3, 4 * (a2 + a3))));
}

TEST_CASE("torus eigenvalue is 4π² times the shortest vector") {
    for (std::size_t m = 2; m <= 3; ++m) {
        const LieGroup t = LieGroup::torus(m);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const MetricSpec s = sample_metric(t, {0.5, 2.0, true}, seed);
            const double oracle = kFourPiSq * oracle_shortest_vector(s.aat(), 8);
            CHECK(lambda1_certified(t, s).lambda1 == doctest::Approx(oracle).epsilon(1e-12));
            CHECK(torus_lambda1(t, s).lambda1 == doctest::Approx(oracle).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(torus_lambda1(LieGroup::su2(), metric_from_matrix(Matrix::identity(3))), ValidationError);
}

TEST_CASE("product spectrum is the minimum over factors for block metrics") {
    const LieGroup g = LieGroup::from_key("su2xsu2");
    Matrix a(6, 6);
    const MetricSpec s1 = sample_metric(LieGroup::su2(), {0.5, 2.0, true}, 1);
    const MetricSpec s2 = sample_metric(LieGroup::su2(), {0.5, 2.0, true}, 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            a(i, j) = s1.a()(i, j);
            a(3 + i, 3 + j) = s2.a()(i, j);
        }
    const double expected = std::min(oracle_su2_lambda1(s1, 1), oracle_su2_lambda1(s2, 1));
    const SpectralResult r = lambda1_certified(g, metric_from_matrix(a));
    CHECK(r.certified);
    CHECK(r.lambda1 == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("casimir cap leaves the result uncertified") {
    const MetricSpec s = metric_from_matrix(Matrix{{10, 0, 0}, {0, 10, 0}, {0, 0, 0.01}});
    const SpectralResult r = lambda1_certified(LieGroup::su2(), s, {20.0});
    CHECK_FALSE(r.certified);
    CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("restricted spectrum") {
    const LieGroup su2 = LieGroup::su2();
    const Matrix id = Matrix::identity(3);
    const RestrictedSpectrum r1 = lambda1_restricted(su2, id, 1);
    CHECK(r1.value == doctest::Approx(3.0));
    const RestrictedSpectrum r2 = lambda1_restricted(su2, id, 2);
    CHECK_FALSE(r2.infinite);
    CHECK(r2.value == doctest::Approx(8.0));
    CHECK(*r2.witness == IrrepLabel::spin(2));
    CHECK(lambda1_restricted(su2, id, 3).infinite);
    CHECK(std::isinf(lambda1_restricted(su2, id, 3).value));

    // spin 1 has a zero-weight vector for X_1(P): invariant dimension 1
    Subalgebra line{{Vector{1, 0, 0}}};
    CHECK(invariant_dim(make_irrep(su2, IrrepLabel::spin(2)), line) == 1);
    CHECK(invariant_dim(make_irrep(su2, IrrepLabel::spin(1)), line) == 0);

    // sandwich λ1(g_{PD}) ≤ λ1_restricted(P, 2) σ_2²
    Rng rng(4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix p = random_rotation(3, rng);
        const MetricSpec s = class_build(su2, DiagonalClass{p}, {{0.2, 5.0, true}}, seed);
        const double bound = lambda1_restricted(su2, s.sorting_rotation(), 2).value * s.sigma_k(2) * s.sigma_k(2);
        CHECK(lambda1_certified(su2, s).lambda1 <= bound * (1 + 1e-9));
    }

    // a line of irrational slope in T² fixes no nontrivial character
    const double phi = (1 + std::sqrt(5.0)) / 2, n = std::sqrt(1 + phi * phi);
    CHECK_THROWS_AS(lambda1_restricted(LieGroup::torus(2), Matrix{{1 / n, -phi / n}, {phi / n, 1 / n}}, 2, 1e4),
                    ComputationError);
}

TEST_CASE("sub-Laplacian") {
    const LieGroup su2 = LieGroup::su2();
    const std::vector<Vector> h1{{1, 0, 0}};
    const SubLaplacianResult flat = sublaplacian_lambda1(su2, h1, Matrix::identity(1), 50);
    CHECK(flat.value == 0.0);
    CHECK(flat.reason == "H-invariant functions exist");
    // −π(X1)² − π(X2)² = 4(j(j+1) − m²), smallest at spin 1/2: 2
    const std::vector<Vector> h2{{1, 0, 0}, {0, 1, 0}};
    const SubLaplacianResult r = sublaplacian_lambda1(su2, h2, Matrix::identity(2), 100);
    CHECK(r.value == doctest::Approx(2.0));
    CHECK_FALSE(r.certified);
    // scaling h by 4 halves the frame, quartering the operator
    const SubLaplacianResult r4 = sublaplacian_lambda1(su2, h2, Matrix{{4, 0}, {0, 4}}, 100);
    CHECK(r4.value == doctest::Approx(0.5));
}
