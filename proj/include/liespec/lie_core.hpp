#pragma once

// Catalog of the supported compact Lie groups (flat tori, SU(2), SO(3) and
// finite products) together with their Lie algebras in a fixed orthonormal
// basis X_1..X_m of the bi-invariant reference inner product g_I.
//
// su(2) normalization: [X1,X2] = 2X3, [X2,X3] = 2X1, [X3,X1] = 2X2, which is
// the bracket of the pure quaternions i, j, k. SO(3) shares the algebra.
// Torus normalization: exp(t X_j) closes up at t = 1.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "liespec/linalg.hpp"

namespace liespec {

enum class GroupKind { Torus, SU2, SO3, Product };

std::string_view to_string(GroupKind k);

/// Structure constants c[i][j][k] with [X_i, X_j] = Σ_k c_ij^k X_k, stored flat.
class StructureConstants {
public:
    explicit StructureConstants(std::size_t m = 0) : m_(m), c_(m * m * m, 0.0) {}
    std::size_t dim() const { return m_; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * m_ + j) * m_ + k]; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return c_[(i * m_ + j) * m_ + k]; }

private:
    std::size_t m_;
    std::vector<double> c_;
};

/// One supported group. Immutable after construction; the constructors check
/// antisymmetry, the Jacobi identity and ad-skewness of g_I (all within 1e-12)
/// and throw ValidationError when any fails.
class LieGroup {
public:
    static LieGroup torus(std::size_t m);
    static LieGroup su2();
    static LieGroup so3();
    /// Product with explicit k_max. Mixing abelian and non-abelian factors is
    /// rejected since k_max is not known for those.
    static LieGroup product(std::vector<LieGroup> factors, std::size_t k_max);
    /// Build from raw structure constants (used by self-tests that inject faults).
    static LieGroup from_structure_constants(GroupKind kind, StructureConstants c, std::size_t k_max,
                                             bool semisimple);

    /// Catalog lookup: "t1".."t4", "su2", "so3", "su2xsu2". Throws ValidationError.
    static LieGroup from_key(std::string_view key);
    static std::vector<std::string> catalog_keys();

    GroupKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    std::size_t k_max() const { return k_max_; }
    bool semisimple() const { return semisimple_; }
    bool abelian() const { return kind_ == GroupKind::Torus; }
    const StructureConstants& structure_constants() const { return c_; }
    const std::vector<LieGroup>& factors() const { return factors_; }
    /// Offset of factor f's coordinates inside the product's coordinate vector.
    std::size_t factor_offset(std::size_t f) const { return offsets_.at(f); }
    const std::string& key() const { return key_; }

    /// Throws ValidationError describing the first violated invariant.
    void validate() const;

private:
    LieGroup() = default;

    GroupKind kind_ = GroupKind::Torus;
    std::size_t dim_ = 0;
    std::size_t k_max_ = 0;
    bool semisimple_ = false;
    StructureConstants c_;
    std::vector<LieGroup> factors_;
    std::vector<std::size_t> offsets_;
    std::string key_;
};

/// k_max for SU(n) from the subgroup-dimension table: n² − 2n + 2.
constexpr std::size_t su_n_k_max(std::size_t n) { return n * n - 2 * n + 2; }

/// Startup calibration: catalog k_max values agree with the table and with
/// su_n_k_max(2). Throws ComputationError on mismatch.
void check_k_max_catalog();

/// Σ_k (Σ_ij X_i Y_j c_ij^k) e_k. Throws ValidationError on length mismatch.
Vector bracket(const LieGroup& g, std::span<const double> x, std::span<const double> y);

/// Orthonormal (w.r.t. g_I) basis of a Lie subalgebra.
struct Subalgebra {
    std::vector<Vector> basis;
    std::size_t dim() const { return basis.size(); }
};

inline constexpr double kRankTolerance = 1e-9;

/// Smallest subalgebra containing `generators`: span, then repeatedly adjoin
/// brackets of basis pairs until the rank stabilizes.
Subalgebra generated_subalgebra(const LieGroup& g, std::span<const Vector> generators);
bool is_bracket_generating(const LieGroup& g, std::span<const Vector> generators);

/// The rotated basis vectors X_j(P) = Σ_i P_ij X_i, i.e. the columns of P.
std::vector<Vector> rotated_basis(const Matrix& p);

/// Smallest k such that X_1(P), ..., X_k(P) is bracket generating. On a
/// torus only the full span generates, so the answer is always m there.
/// Throws ValidationError when P is not orthogonal within 1e-10.
std::size_t ell_index(const LieGroup& g, const Matrix& p);

/// Dimensions of the subalgebras generated by each prefix X_1(P)..X_k(P), k = 1..m.
std::vector<std::size_t> prefix_generated_dims(const LieGroup& g, const Matrix& p);

// --- group elements -------------------------------------------------------

struct Quaternion {
    double w = 1, x = 0, y = 0, z = 0;

    static Quaternion identity() { return {}; }
    Quaternion conj() const { return {w, -x, -y, -z}; }
    Quaternion operator-() const { return {-w, -x, -y, -z}; }
    double norm() const;
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Torus: coordinates in [0,1)^m. SU2: unit quaternion. SO3: unit quaternion
/// with the sign fixed so the first nonzero of (w, x, y, z) is positive.
/// Product: one element per factor.
struct GroupElement {
    std::variant<Vector, Quaternion, std::vector<GroupElement>> payload;

    const Vector& torus() const { return std::get<Vector>(payload); }
    const Quaternion& quaternion() const { return std::get<Quaternion>(payload); }
    const std::vector<GroupElement>& parts() const { return std::get<std::vector<GroupElement>>(payload); }
};

/// Canonical sign representative of ±q.
Quaternion so3_canonical(Quaternion q);

GroupElement identity_element(const LieGroup& g);
GroupElement multiply(const LieGroup& g, const GroupElement& a, const GroupElement& b);
GroupElement inverse(const LieGroup& g, const GroupElement& a);
/// Throws ValidationError when the payload kind or size does not fit the group.
void check_element(const LieGroup& g, const GroupElement& a);

GroupElement group_exp(const LieGroup& g, std::span<const double> x);

struct LogResult {
    Vector value;
    /// Input sat on the cut locus (SU2: −identity, SO3: half turn, torus:
    /// a coordinate at exactly 1/2); value is one principal choice.
    bool at_cut_locus = false;
};

/// Principal logarithm: torus in (−1/2, 1/2]^m, SU2 with rotation angle in
/// [0, π], SO3 with angle in [0, π/2].
LogResult group_log(const LieGroup& g, const GroupElement& a);

/// Quaternion exponential/logarithm shared by SU2 and SO3.
Quaternion quaternion_exp(double x1, double x2, double x3);
std::array<double, 3> quaternion_log(const Quaternion& q);

} // namespace liespec
