#pragma once

// Irreducible representations of the catalog groups and the spectral
// quantities built from them.
//
// For a unitary irrep π, −C_A acts on V_π as −Σ_ij (A Aᵀ)_ij π(X_i) π(X_j),
// and λ_1(G, g_A) is the minimum of λ_min(π(−C_A)) over nontrivial π. Since
// σ_m² C_I ≤ C_A in the Loewner sense, λ_min(π(−C_A)) ≥ σ_m² λ^π, which lets
// the search over irreps stop once σ_m² λ^π exceeds the best value found.

#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "liespec/lie_core.hpp"
#include "liespec/metric_space.hpp"

namespace liespec {

/// Spin(j) for SU2/SO3 (stored as 2j), Character(n) for tori, Tuple for products.
struct IrrepLabel {
    enum class Kind { Spin, Character, Tuple };
    Kind kind = Kind::Spin;
    int twice_spin = 0;
    std::vector<long> character;
    std::vector<IrrepLabel> parts;

    static IrrepLabel spin(int twice_j) { return {Kind::Spin, twice_j, {}, {}}; }
    static IrrepLabel chi(std::vector<long> n) { return {Kind::Character, 0, std::move(n), {}}; }
    static IrrepLabel tuple(std::vector<IrrepLabel> p) { return {Kind::Tuple, 0, {}, std::move(p)}; }

    bool trivial() const;
    /// "spin(1/2)", "chi(1,0)", "(spin(1/2),spin(0))"
    std::string to_string() const;
    friend bool operator==(const IrrepLabel&, const IrrepLabel&) = default;
};

struct Irrep {
    IrrepLabel label;
    std::size_t dim = 1;
    /// π(X_1), ..., π(X_m), anti-hermitian d×d. Shared and immutable.
    std::shared_ptr<const std::vector<CMatrix>> generators;
    /// λ^π with π(−C_I) = λ^π·Id.
    double casimir = 0.0;

    const CMatrix& generator(std::size_t j) const { return (*generators)[j]; }
};

/// π(X) = Σ_j x_j π(X_j)
CMatrix represent(const Irrep& irrep, std::span<const double> x);

/// Spin-j generators π(X_a) = −2i J_a from the ladder construction, memoized
/// in a mutex-guarded cache.
std::shared_ptr<const std::vector<CMatrix>> spin_generators(int twice_j);

/// Build one irrep of g from its label. Throws ValidationError when the label
/// does not belong to g (e.g. half-integer spin for SO3).
Irrep make_irrep(const LieGroup& g, const IrrepLabel& label);

/// Lazy enumeration of irreps in ascending Casimir order. Equal Casimir values
/// come out in a fixed deterministic order. The trivial irrep is skipped unless
/// include_trivial is set (factor streams of products need it).
class IrrepStream {
public:
    explicit IrrepStream(const LieGroup& g, bool include_trivial = false);
    IrrepStream(const IrrepStream&) = delete;
    IrrepStream& operator=(const IrrepStream&) = delete;
    IrrepStream(IrrepStream&&) noexcept;
    IrrepStream& operator=(IrrepStream&&) noexcept;
    ~IrrepStream();

    /// Casimir of the irrep next() will return.
    double peek_casimir();
    Irrep next();

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

/// All irreps with λ^π ≤ cutoff, ascending. Excludes the trivial irrep.
std::vector<Irrep> enumerate_irreps(const LieGroup& g, double casimir_cutoff);

/// Hermitian d×d matrix −Σ_ij (A Aᵀ)_ij π(X_i) π(X_j).
CMatrix assemble_minus_ca(const Irrep& irrep, const Matrix& aat);
CMatrix assemble_minus_ca(const Irrep& irrep, const MetricSpec& spec);

struct SpectralResult {
    double lambda1 = 0.0;
    IrrepLabel witness;
    bool certified = false;
    /// Casimir level through which every irrep was examined: all π with
    /// λ^π < window were evaluated. Certified results have σ_m²·window > lambda1.
    double window = 0.0;
    std::size_t evaluations = 0;
    std::string diagnostics;
};

struct CertifyOptions {
    double casimir_cap = 1e6;
};

/// Certified λ_1(G, g_A). Returns an uncertified result (with diagnostics)
/// when the Casimir window would exceed options.casimir_cap.
SpectralResult lambda1_certified(const LieGroup& g, const MetricSpec& spec, const CertifyOptions& options = {});

/// λ_1 of the reference metric g_I, i.e. the smallest nontrivial Casimir.
double lambda1_reference(const LieGroup& g);

/// Flat torus: λ_1 = 4π² min_{n ≠ 0} nᵀ A Aᵀ n by exhaustive box search.
/// Throws ValidationError unless g is a torus with m ≤ 4.
SpectralResult torus_lambda1(const LieGroup& g, const MetricSpec& spec);

/// dim of the common kernel of π(X), X ∈ H.
std::size_t invariant_dim(const Irrep& irrep, const Subalgebra& h);

struct RestrictedSpectrum {
    double value = std::numeric_limits<double>::infinity();
    bool infinite = true;
    std::optional<IrrepLabel> witness;
};

/// First eigenvalue of Δ_I restricted to functions coming from irreps with a
/// nonzero vector fixed by the subgroup generated by X_1(P)..X_{k−1}(P).
/// Infinite when that prefix already generates g. Throws ComputationError if
/// the Casimir cap is reached (e.g. a dense torus line).
RestrictedSpectrum lambda1_restricted(const LieGroup& g, const Matrix& p, std::size_t k, double casimir_cap = 1e6);

struct SubLaplacianResult {
    double value = 0.0;
    bool certified = false; // never certified: no lower bound over unexamined irreps
    double window = 0.0;
    std::optional<IrrepLabel> witness;
    std::string reason;
};

/// min over nontrivial irreps with λ^π ≤ window of λ_min(−Σ π(Y_i)²), {Y_i}
/// an h-orthonormal basis of H. h is the Gram matrix in the given H basis.
/// Non-generating H gives 0 with reason "H-invariant functions exist".
SubLaplacianResult sublaplacian_lambda1(const LieGroup& g, std::span<const Vector> h_basis, const Matrix& h,
                                        double window);

} // namespace liespec
