#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "liespec/metric_space.hpp"

using namespace liespec;

TEST_CASE("singular values of a diagonal matrix") {
    const MetricSpec s = metric_from_matrix(Matrix{{1, 0, 0}, {0, 3, 0}, {0, 0, 2}});
    CHECK(s.sigma()[0] == doctest::Approx(3.0));
    CHECK(s.sigma()[1] == doctest::Approx(2.0));
    CHECK(s.sigma()[2] == doctest::Approx(1.0));
    CHECK(s.sigma_k(2) == doctest::Approx(2.0));
    // P sorts A Aᵀ: Pᵀ A Aᵀ P = diag(σ²)
    const Matrix p = s.sorting_rotation();
    const Matrix d = p.transpose() * s.aat() * p;
    CHECK(d(0, 0) == doctest::Approx(9.0));
    CHECK(d(1, 1) == doctest::Approx(4.0));
    CHECK(std::abs(d(0, 1)) < 1e-12);
}

TEST_CASE("gram matrix is (A Aᵀ)^-1 and the frame X_j(A) is orthonormal") {
    Rng rng(5);
    const Matrix a = random_rotation(3, rng) * Matrix{{2, 0, 0}, {0.5, 1, 0}, {0.1, 0.2, 0.7}};
    const MetricSpec s = metric_from_matrix(a);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double g = quadratic_form(s.gram(), a.column(i), a.column(j));
            CHECK(g == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
}

TEST_CASE("invalid matrices") {
    CHECK_THROWS_AS(metric_from_matrix(Matrix{{1, 2}, {2, 4}}), SingularMatrixError);
    CHECK_THROWS_AS(metric_from_matrix(Matrix{{1, 0}, {0, std::numeric_limits<double>::quiet_NaN()}}),
                    ValidationError);
    CHECK_THROWS_AS(metric_from_matrix(Matrix(2, 3)), ValidationError);
}

TEST_CASE("right multiplication by orthogonal R leaves g_A unchanged") {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        const MetricSpec a = sample_metric(LieGroup::su2(), {}, 100 + t);
        const MetricSpec ar = metric_from_matrix(a.a() * random_orthogonal(3, rng));
        CHECK(max_abs(ar.gram() - a.gram()) <= 1e-9 * max_abs(a.gram()));
    }
}

TEST_CASE("canonical form reproduces the metric") {
    const MetricSpec s = sample_metric(LieGroup::torus(3), {}, 4);
    const CanonicalForm c = canonical_form(s);
    const MetricSpec back = metric_from_matrix(c.p * c.d);
    CHECK(max_abs(back.aat() - s.aat()) < 1e-9 * max_abs(s.aat()));
}

TEST_CASE("Loewner order") {
    const MetricSpec a = metric_from_matrix(Matrix{{1, 0}, {0, 1}});
    const MetricSpec b = metric_from_matrix(Matrix{{2, 0}, {0, 1}});
    const MetricSpec c = metric_from_matrix(Matrix{{3, 0}, {0, 0.5}});
    CHECK(loewner_leq(a, b));
    CHECK_FALSE(loewner_leq(b, a));
    CHECK_FALSE(loewner_leq(a, c));
    CHECK_FALSE(loewner_leq(c, a));
}

TEST_CASE("sampler is deterministic and respects the range") {
    const SamplerConfig cfg{0.2, 5.0, true};
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const MetricSpec s1 = sample_metric(LieGroup::su2(), cfg, seed);
        const MetricSpec s2 = sample_metric(LieGroup::su2(), cfg, seed);
        CHECK(s1.a() == s2.a());
        for (double x : s1.sigma()) {
            CHECK(x >= 0.2 * (1 - 1e-12));
            CHECK(x <= 5.0 * (1 + 1e-12));
        }
    }
    CHECK_FALSE(sample_metric(LieGroup::su2(), cfg, 1).a() == sample_metric(LieGroup::su2(), cfg, 2).a());
    const MetricSpec diag = sample_metric(LieGroup::su2(), {0.2, 5.0, false}, 3);
    CHECK(diag.a()(0, 1) == 0.0);
}

TEST_CASE("Rng streams are fixed across platforms") {
    Rng a(42), b(42);
    for (int i = 0; i < 5; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(0);
    double s = 0;
    for (int i = 0; i < 20000; ++i) s += c.uniform();
    CHECK(s / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("random rotations are orthogonal with det +1") {
    Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const Matrix r = random_rotation(4, rng);
        CHECK(is_orthogonal(r, 1e-12));
        CHECK(determinant(r) == doctest::Approx(1.0));
    }
}

TEST_CASE("restricted classes") {
    const LieGroup su2 = LieGroup::su2();
    const ClassBuildParams params{{0.2, 5.0, true}};

    // on SU(2) k_max = 2 and the σ_2 ≤ c0 σ_kmax condition is empty
    const SigmaRatioClass sr{2.0};
    CHECK(class_member(su2, sr, metric_from_matrix(Matrix{{5, 0, 0}, {0, 1, 0}, {0, 0, 0.01}})));
    const LieGroup t3 = LieGroup::torus(3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MetricSpec s = class_build(t3, sr, params, seed);
        CHECK(class_member(t3, sr, s));
        CHECK(s.sigma_k(2) <= 2.0 * s.sigma_k(3) * (1 + 1e-12));
    }
    CHECK_FALSE(class_member(t3, sr, metric_from_matrix(Matrix{{5, 0, 0}, {0, 5, 0}, {0, 0, 1}})));

    Rng rng(1);
    const Matrix p = random_rotation(3, rng);
    const DiagonalClass dc{p};
    const ClassOfP cp{p};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CHECK(class_member(su2, dc, class_build(su2, dc, params, seed)));
        CHECK(class_member(su2, cp, class_build(su2, cp, params, seed)));
    }
    // a generic metric belongs to neither
    const MetricSpec generic = sample_metric(su2, {}, 77);
    CHECK_FALSE(class_member(su2, dc, generic));
    CHECK_FALSE(class_member(su2, cp, generic));
    // ClassOfP needs descending σ along the frame
    const MetricSpec wrong_order = metric_from_matrix(p * Matrix{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    CHECK(class_member(su2, dc, wrong_order));
    CHECK_FALSE(class_member(su2, cp, wrong_order));
    CHECK_THROWS_AS(class_build(su2, ClassOfP{Matrix{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}}, params, 0), ValidationError);
}

TEST_CASE("block orthogonal factor") {
    Rng rng(2);
    const Matrix q = random_block_orthogonal(5, 3, rng);
    CHECK(is_orthogonal(q, 1e-12));
    CHECK(q(2, 2) == 1.0);
    CHECK(q(0, 3) == 0.0);
    CHECK(q(4, 1) == 0.0);
}

TEST_CASE("matrix text formats") {
    const Matrix a = parse_inline_matrix("1, 2, 3 4");
    CHECK(a == Matrix{{1, 2}, {3, 4}});
    CHECK_THROWS_AS(parse_inline_matrix("1 2 3"), ValidationError);
    CHECK_THROWS_AS(parse_inline_matrix("1 2 x 4"), ValidationError);
    CHECK_THROWS_AS(parse_inline_matrix("1 2 nan 4"), ValidationError);

    std::istringstream ok("2\n1 2\n3 4\n");
    CHECK(parse_matrix_text(ok) == a);
    std::istringstream short_row("2\n1 2\n3\n");
    CHECK_THROWS_AS(parse_matrix_text(short_row), ValidationError);
    std::istringstream trailing("2\n1 2\n3 4\n5\n");
    CHECK_THROWS_AS(parse_matrix_text(trailing), ValidationError);

    const Matrix r = sample_metric(LieGroup::su2(), {}, 9).a();
    const auto path = std::filesystem::temp_directory_path() / "liespec_matrix_roundtrip.txt";
    {
        std::ofstream out(path);
        write_matrix_text(out, r);
    }
    CHECK(read_matrix_file(path.string()) == r);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_matrix_file("/nonexistent/liespec.txt"), ValidationError);
}
