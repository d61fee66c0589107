#pragma once

// Left-invariant metrics g_A, parameterized by an invertible m×m matrix A.
// The rotated basis X_j(A) = Σ_i a_ij X_i is declared g_A-orthonormal, which
// makes the Gram matrix of g_A in the reference basis equal to (A Aᵀ)⁻¹.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

#include "liespec/lie_core.hpp"

namespace liespec {

inline constexpr double kSingularThreshold = 1e-10;

/// Immutable; built only through metric_from_matrix.
class MetricSpec {
public:
    const Matrix& a() const { return a_; }
    /// A Aᵀ
    const Matrix& aat() const { return aat_; }
    /// σ_1 ≥ ... ≥ σ_m > 0, σ_k² the eigenvalues of A Aᵀ.
    const Vector& sigma() const { return sigma_; }
    /// Orthogonal P with A Aᵀ = P diag(σ²) Pᵀ.
    const Matrix& sorting_rotation() const { return p_sort_; }
    /// (A Aᵀ)⁻¹, the Gram matrix g_A(X_i, X_j).
    const Matrix& gram() const { return gram_; }

    std::size_t dim() const { return a_.rows(); }
    /// 1-based, matching σ_k notation.
    double sigma_k(std::size_t k) const { return sigma_.at(k - 1); }
    double sigma_max() const { return sigma_.front(); }
    double sigma_min() const { return sigma_.back(); }

    /// g_A(x, x)
    double length_squared(std::span<const double> x) const { return quadratic_form(gram_, x); }

private:
    friend MetricSpec metric_from_matrix(const Matrix& a);
    Matrix a_, aat_, p_sort_, gram_;
    Vector sigma_;
};

/// Throws SingularMatrixError when |det A| ≤ 1e-10·(max |a_ij|)^m, ValidationError
/// for non-square or non-finite input.
MetricSpec metric_from_matrix(const Matrix& a);

struct CanonicalForm {
    Matrix p; // sorting rotation
    Matrix d; // diag(σ)
};

/// g_A = g_{P·D} with P sorting A and D = diag(σ).
CanonicalForm canonical_form(const MetricSpec& spec);

/// A Aᵀ ≤ B Bᵀ in the Loewner order: λ_min(B Bᵀ − A Aᵀ) ≥ −1e-10·‖B Bᵀ‖.
bool loewner_leq(const MetricSpec& a, const MetricSpec& b);

// --- sampling -----------------------------------------------------------

/// Portable seeded generator (splitmix64 seeding of xoshiro256**). Identical
/// streams on every platform, unlike the standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Haar-distributed rotation in SO(m) from the QR factor of a Gaussian matrix.
Matrix random_rotation(std::size_t m, Rng& rng);
/// Haar-distributed element of O(m) (determinant either sign).
Matrix random_orthogonal(std::size_t m, Rng& rng);

struct SamplerConfig {
    double lo = 0.1;
    double hi = 10.0;
    /// false keeps P = I so A is diagonal.
    bool random_rotation = true;
};

/// σ's log-uniform on [lo, hi], sorted descending; P a seeded random
/// rotation; A = P·diag(σ). Deterministic in seed.
MetricSpec sample_metric(const LieGroup& g, const SamplerConfig& cfg, std::uint64_t seed);

// --- restricted metric classes ------------------------------------------

/// Σ(c0) = { g_A : σ_2(A) ≤ c0 σ_{k_max}(A) }.
struct SigmaRatioClass {
    double c0 = 1.0;
};

/// { g_{PQD} : Q ∈ O(m,k), D descending diagonal } with k = ell_index(P),
/// Q = blockdiag(Q1, 1, Q2), Q1 ∈ O(k−1), Q2 ∈ O(m−k).
struct ClassOfP {
    Matrix p;
};

/// Metrics diagonal in the frame X_j(P): { g_{P·D} : D positive diagonal }.
struct DiagonalClass {
    Matrix p;
};

using MetricClassSpec = std::variant<SigmaRatioClass, ClassOfP, DiagonalClass>;

bool class_member(const LieGroup& g, const MetricClassSpec& cls, const MetricSpec& spec);

struct ClassBuildParams {
    SamplerConfig sigma_range; // σ's drawn log-uniform, sorted descending
};

/// Build a member. SigmaRatio builds with σ_2..σ_{k_max} squeezed into a
/// c0-window; ClassOfP returns A = P·Q·D; DiagonalClass returns A = P·D with
/// D in arbitrary (unsorted) order. Throws ValidationError for malformed P.
MetricSpec class_build(const LieGroup& g, const MetricClassSpec& cls, const ClassBuildParams& params,
                       std::uint64_t seed);

/// blockdiag(Q1, 1, Q2) with seeded Haar Q1 ∈ O(k−1), Q2 ∈ O(m−k).
Matrix random_block_orthogonal(std::size_t m, std::size_t k, Rng& rng);

// --- matrix text format -------------------------------------------------

/// Line 1: m. Then m lines of m floats (row-major A). NaN/Inf rejected.
Matrix parse_matrix_text(std::istream& in);
Matrix read_matrix_file(const std::string& path);
/// Inline form: m² numbers separated by commas and/or whitespace, row-major.
Matrix parse_inline_matrix(std::string_view text);
void write_matrix_text(std::ostream& out, const Matrix& a);

} // namespace liespec
