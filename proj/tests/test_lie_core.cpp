#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "liespec/lie_core.hpp"
#include "liespec/metric_space.hpp"

using namespace liespec;

namespace {

Vector e(std::size_t m, std::size_t i) {
    Vector v(m, 0.0);
    v[i] = 1.0;
    return v;
}

// commutator of pure quaternions: the oracle for the su(2) bracket
Vector quaternion_commutator(const Vector& a, const Vector& b) {
    const Quaternion p{0, a[0], a[1], a[2]}, q{0, b[0], b[1], b[2]};
    const Quaternion pq = p * q, qp = q * p;
    return {pq.x - qp.x, pq.y - qp.y, pq.z - qp.z};
}

} // namespace

TEST_CASE("su(2) bracket equals the quaternion commutator") {
    const LieGroup g = LieGroup::su2();
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        Vector a(3), b(3);
        for (auto& x : a) x = rng.normal();
        for (auto& x : b) x = rng.normal();
        const Vector lhs = bracket(g, a, b);
        const Vector rhs = quaternion_commutator(a, b);
        for (int i = 0; i < 3; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-13));
    }
    const Vector x3 = bracket(g, e(3, 0), e(3, 1));
    CHECK(x3[2] == 2.0);
}

TEST_CASE("catalog") {
    for (const auto& key : LieGroup::catalog_keys()) CHECK(LieGroup::from_key(key).key() == key);
    CHECK_THROWS_AS(LieGroup::from_key("su3"), ValidationError);
    CHECK(LieGroup::from_key("t4").dim() == 4);
    CHECK(LieGroup::from_key("su2xsu2").dim() == 6);
    CHECK_THROWS_AS(LieGroup::product({LieGroup::torus(1), LieGroup::su2()}, 3), ValidationError);
    CHECK_THROWS_AS(LieGroup::torus(0), ValidationError);
}

TEST_CASE("k_max table") {
    CHECK(su_n_k_max(2) == 2);
    CHECK(su_n_k_max(3) == 5);
    CHECK(LieGroup::su2().k_max() == 2);
    CHECK(LieGroup::so3().k_max() == 2);
    for (std::size_t m = 1; m <= 4; ++m) CHECK(LieGroup::torus(m).k_max() == m);
    CHECK(LieGroup::from_key("su2xsu2").k_max() == 5);
    CHECK_NOTHROW(check_k_max_catalog());
}

TEST_CASE("Jacobi identity violation is detected") {
    // a totally antisymmetric cross term keeps antisymmetry and ad-invariance
    const LieGroup g = LieGroup::from_key("su2xsu2");
    StructureConstants c = g.structure_constants();
    const double eps = 1e-3;
    c(0, 3, 4) += eps;
    c(3, 0, 4) -= eps;
    c(0, 4, 3) -= eps;
    c(4, 0, 3) += eps;
    c(3, 4, 0) += eps;
    c(4, 3, 0) -= eps;
    try {
        (void)LieGroup::from_structure_constants(GroupKind::Product, c, 5, true);
        FAIL("perturbed constants accepted");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("Jacobi") != std::string::npos);
    }
}

TEST_CASE("antisymmetry violation is detected") {
    StructureConstants c = LieGroup::su2().structure_constants();
    c(0, 1, 2) += 1e-6;
    CHECK_THROWS_AS(LieGroup::from_structure_constants(GroupKind::SU2, c, 2, true), ValidationError);
}

TEST_CASE("generated subalgebras and the bracket-generating index") {
    const LieGroup su2 = LieGroup::su2();
    CHECK(ell_index(su2, Matrix::identity(3)) == 2);
    CHECK(prefix_generated_dims(su2, Matrix::identity(3)) == std::vector<std::size_t>{1, 3, 3});
    Rng rng(3);
    for (int t = 0; t < 10; ++t) CHECK(ell_index(su2, random_orthogonal(3, rng)) == 2);

    const LieGroup t3 = LieGroup::torus(3);
    CHECK(ell_index(t3, random_orthogonal(3, rng)) == 3);

    const LieGroup pp = LieGroup::from_key("su2xsu2");
    CHECK(ell_index(pp, Matrix::identity(6)) == 5);
    CHECK(prefix_generated_dims(pp, Matrix::identity(6)) == std::vector<std::size_t>{1, 3, 3, 4, 6, 6});

    // the diagonal su(2) is a proper subalgebra
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<Vector> diag{{r, 0, 0, r, 0, 0}, {0, r, 0, 0, r, 0}};
    CHECK(generated_subalgebra(pp, diag).dim() == 3);
    CHECK_FALSE(is_bracket_generating(pp, diag));

    CHECK_THROWS_AS(ell_index(su2, Matrix{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}), ValidationError);
}

TEST_CASE("quaternion exp and log") {
    const LieGroup g = LieGroup::su2();
    const GroupElement minus_one = group_exp(g, Vector{std::numbers::pi, 0, 0});
    CHECK(minus_one.quaternion().w == doctest::Approx(-1.0));
    CHECK(group_log(g, GroupElement{-Quaternion::identity()}).at_cut_locus);

    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        Vector v(3);
        for (auto& x : v) x = rng.normal();
        const double n = norm(v);
        if (n >= std::numbers::pi) for (auto& x : v) x *= 3.0 / n;
        const Vector back = group_log(g, group_exp(g, v)).value;
        for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-11));
    }
    const auto small = quaternion_log(quaternion_exp(1e-9, 2e-9, 0));
    CHECK(small[0] == doctest::Approx(1e-9).epsilon(1e-12));
}

TEST_CASE("SO(3) identifies q with -q") {
    const LieGroup g = LieGroup::so3();
    const GroupElement a = group_exp(g, Vector{2.5, 0.0, 0.0});
    const Vector l = group_log(g, a).value;
    CHECK(std::abs(l[0]) == doctest::Approx(std::numbers::pi - 2.5));
    const GroupElement half = group_exp(g, Vector{0.0, std::numbers::pi / 2, 0.0});
    CHECK(group_log(g, half).at_cut_locus);
}

TEST_CASE("group operations") {
    for (const std::string key : {"t2", "su2", "so3", "su2xsu2"}) {
        const LieGroup g = LieGroup::from_key(key);
        Rng rng(12);
        Vector x(g.dim()), y(g.dim());
        for (auto& v : x) v = 0.3 * rng.normal();
        for (auto& v : y) v = 0.3 * rng.normal();
        const GroupElement a = group_exp(g, x), b = group_exp(g, y);
        const GroupElement ab = multiply(g, a, b);
        CHECK_NOTHROW(check_element(g, ab));
        const GroupElement id = multiply(g, ab, inverse(g, ab));
        CHECK(norm(group_log(g, id).value) < 1e-12);
    }
    CHECK_THROWS_AS(check_element(LieGroup::su2(), GroupElement{Vector{0.1, 0.2}}), ValidationError);
}

TEST_CASE("torus log wraps into the principal cell") {
    const LieGroup g = LieGroup::torus(2);
    const auto l = group_log(g, GroupElement{Vector{0.75, 0.5}});
    CHECK(l.value[0] == doctest::Approx(-0.25));
    CHECK(l.value[1] == doctest::Approx(0.5));
    CHECK(l.at_cut_locus);
}
