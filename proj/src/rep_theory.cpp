#include "liespec/rep_theory.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace liespec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

double spin_casimir(int twice_j) { return static_cast<double>(twice_j) * (twice_j + 2); }

std::string spin_text(int twice_j) {
    return twice_j % 2 == 0 ? std::to_string(twice_j / 2) : std::to_string(twice_j) + "/2";
}

} // namespace

bool IrrepLabel::trivial() const {
    switch (kind) {
    case Kind::Spin: return twice_spin == 0;
    case Kind::Character: return std::all_of(character.begin(), character.end(), [](long v) { return v == 0; });
    case Kind::Tuple: return std::all_of(parts.begin(), parts.end(), [](const IrrepLabel& p) { return p.trivial(); });
    }
    return false;
}

std::string IrrepLabel::to_string() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Spin: os << "spin(" << spin_text(twice_spin) << ")"; break;
    case Kind::Character:
        os << "chi(";
        for (std::size_t i = 0; i < character.size(); ++i) os << (i ? "," : "") << character[i];
        os << ")";
        break;
    case Kind::Tuple:
        os << "(";
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i].to_string();
        os << ")";
        break;
    }
    return os.str();
}

CMatrix represent(const Irrep& irrep, std::span<const double> x) {
    const auto& gens = *irrep.generators;
    if (x.size() != gens.size()) throw ValidationError("represent: vector length mismatch");
    CMatrix out(irrep.dim, irrep.dim);
    for (std::size_t j = 0; j < gens.size(); ++j)
        if (x[j] != 0.0) out += gens[j] * Complex(x[j], 0.0);
    return out;
}

std::shared_ptr<const std::vector<CMatrix>> spin_generators(int twice_j) {
    if (twice_j < 0) throw ValidationError("spin must be non-negative");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const std::vector<CMatrix>>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(twice_j); it != cache.end()) return it->second;
    }
    // basis |j, m⟩ with m = j, j−1, ..., −j  (index r ↔ m = j − r)
    const std::size_t d = static_cast<std::size_t>(twice_j) + 1;
    const double j = twice_j / 2.0;
    CMatrix jp(d, d), jm(d, d), j3(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        const double m = j - static_cast<double>(r);
        j3(r, r) = m;
        if (r > 0) {
            // J+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩, and |m+1⟩ has index r−1
            const double c = std::sqrt(j * (j + 1) - m * (m + 1));
            jp(r - 1, r) = c;
            jm(r, r - 1) = c;
        }
    }
    const Complex minus_two_i(0.0, -2.0);
    const CMatrix j1 = (jp + jm) * Complex(0.5, 0.0);
    const CMatrix j2 = (jp - jm) * Complex(0.0, -0.5);
    auto gens = std::make_shared<const std::vector<CMatrix>>(
        std::vector<CMatrix>{j1 * minus_two_i, j2 * minus_two_i, j3 * minus_two_i});
    std::lock_guard lock(mutex);
    return cache.emplace(twice_j, std::move(gens)).first->second;
}

Irrep make_irrep(const LieGroup& g, const IrrepLabel& label) {
    switch (g.kind()) {
    case GroupKind::SU2:
    case GroupKind::SO3: {
        if (label.kind != IrrepLabel::Kind::Spin) throw ValidationError("expected a spin label");
        if (g.kind() == GroupKind::SO3 && label.twice_spin % 2 != 0)
            throw ValidationError("SO(3) has only integer spins");
        return {label, static_cast<std::size_t>(label.twice_spin) + 1, spin_generators(label.twice_spin),
                spin_casimir(label.twice_spin)};
    }
    case GroupKind::Torus: {
        if (label.kind != IrrepLabel::Kind::Character || label.character.size() != g.dim())
            throw ValidationError("expected a character label of the torus dimension");
        std::vector<CMatrix> gens;
        double n2 = 0.0;
        for (long n : label.character) {
            CMatrix x(1, 1);
            x(0, 0) = Complex(0.0, kTwoPi * static_cast<double>(n));
            gens.push_back(std::move(x));
            n2 += static_cast<double>(n) * static_cast<double>(n);
        }
        return {label, 1, std::make_shared<const std::vector<CMatrix>>(std::move(gens)), kFourPiSq * n2};
    }
    case GroupKind::Product: {
        if (label.kind != IrrepLabel::Kind::Tuple || label.parts.size() != g.factors().size())
            throw ValidationError("expected a tuple label matching the product");
        std::vector<Irrep> parts;
        std::size_t dim = 1;
        double casimir = 0.0;
        for (std::size_t f = 0; f < g.factors().size(); ++f) {
            parts.push_back(make_irrep(g.factors()[f], label.parts[f]));
            dim *= parts.back().dim;
            casimir += parts.back().casimir;
        }
        std::vector<CMatrix> gens;
        for (std::size_t f = 0; f < parts.size(); ++f) {
            std::size_t left = 1, right = 1;
            for (std::size_t e = 0; e < f; ++e) left *= parts[e].dim;
            for (std::size_t e = f + 1; e < parts.size(); ++e) right *= parts[e].dim;
            const CMatrix il = CMatrix::identity(left), ir = CMatrix::identity(right);
            for (const auto& x : *parts[f].generators) gens.push_back(kron(kron(il, x), ir));
        }
        return {label, dim, std::make_shared<const std::vector<CMatrix>>(std::move(gens)), casimir};
    }
    }
    throw ValidationError("unknown group kind");
}

// --- enumeration ---------------------------------------------------------

struct IrrepStream::Impl {
    virtual ~Impl() = default;
    virtual double peek() = 0;
    virtual Irrep next() = 0;
};

namespace {

class SpinStream final : public IrrepStream::Impl {
public:
    SpinStream(const LieGroup& g, bool include_trivial)
        : group_(g), step_(g.kind() == GroupKind::SO3 ? 2 : 1), next_(include_trivial ? 0 : step_) {}
    double peek() override { return spin_casimir(next_); }
    Irrep next() override {
        Irrep r = make_irrep(group_, IrrepLabel::spin(next_));
        next_ += step_;
        return r;
    }

private:
    LieGroup group_;
    int step_;
    int next_;
};

/// Characters in shells of |n|², served in (|n|², lexicographic) order. The
/// box |n_j| ≤ R holds every n with |n|² ≤ R², so each refill with doubled R
/// appends the next complete range of shells.
class TorusStream final : public IrrepStream::Impl {
public:
    TorusStream(const LieGroup& g, bool include_trivial) : group_(g), include_trivial_(include_trivial) { refill(); }
    double peek() override {
        if (buffer_.empty()) refill();
        return kFourPiSq * static_cast<double>(norm2(buffer_.front()));
    }
    Irrep next() override {
        if (buffer_.empty()) refill();
        std::vector<long> n = std::move(buffer_.front());
        buffer_.pop_front();
        return make_irrep(group_, IrrepLabel::chi(std::move(n)));
    }

private:
    static long norm2(const std::vector<long>& n) {
        long s = 0;
        for (long v : n) s += v * v;
        return s;
    }

    void refill() {
        const std::size_t m = group_.dim();
        const long lo2 = served_r_ < 0 ? -1 : served_r_ * served_r_;
        const long r = served_r_ < 0 ? 2 : 2 * served_r_;
        const long hi2 = r * r;
        std::vector<std::vector<long>> shell;
        std::vector<long> n(m, -r);
        while (true) {
            const long n2 = norm2(n);
            if (n2 > lo2 && n2 <= hi2 && (include_trivial_ || n2 > 0)) shell.push_back(n);
            std::size_t i = 0;
            while (i < m && n[i] == r) n[i++] = -r;
            if (i == m) break;
            ++n[i];
        }
        std::sort(shell.begin(), shell.end(), [](const auto& a, const auto& b) {
            const long na = norm2(a), nb = norm2(b);
            return na != nb ? na < nb : a < b;
        });
        for (auto& v : shell) buffer_.push_back(std::move(v));
        served_r_ = r;
        if (buffer_.empty()) refill();
    }

    LieGroup group_;
    bool include_trivial_;
    long served_r_ = -1;
    std::deque<std::vector<long>> buffer_;
};

/// Best-first merge of factor streams on the sum of Casimirs.
class ProductStream final : public IrrepStream::Impl {
public:
    ProductStream(const LieGroup& g, bool include_trivial) : group_(g), include_trivial_(include_trivial) {
        for (const auto& f : g.factors()) factors_.push_back(Factor{IrrepStream(f, true), {}});
        const std::vector<std::size_t> origin(factors_.size(), 0);
        push(origin);
        if (!include_trivial_) pop_top(); // (trivial, ..., trivial)
    }
    double peek() override { return heap_.top().first; }
    Irrep next() override {
        const auto idx = pop_top();
        std::vector<IrrepLabel> labels;
        for (std::size_t f = 0; f < factors_.size(); ++f) labels.push_back(factor_irrep(f, idx[f]).label);
        return make_irrep(group_, IrrepLabel::tuple(std::move(labels)));
    }

private:
    struct Factor {
        IrrepStream stream;
        std::vector<Irrep> seen;
    };
    using Entry = std::pair<double, std::vector<std::size_t>>;

    const Irrep& factor_irrep(std::size_t f, std::size_t i) {
        auto& fac = factors_[f];
        while (fac.seen.size() <= i) fac.seen.push_back(fac.stream.next());
        return fac.seen[i];
    }

    void push(const std::vector<std::size_t>& idx) {
        if (!visited_.insert(idx).second) return;
        double c = 0.0;
        for (std::size_t f = 0; f < idx.size(); ++f) c += factor_irrep(f, idx[f]).casimir;
        heap_.emplace(c, idx);
    }

    std::vector<std::size_t> pop_top() {
        auto idx = heap_.top().second;
        heap_.pop();
        for (std::size_t f = 0; f < idx.size(); ++f) {
            auto succ = idx;
            ++succ[f];
            push(succ);
        }
        return idx;
    }

    LieGroup group_;
    bool include_trivial_;
    std::vector<Factor> factors_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    std::set<std::vector<std::size_t>> visited_;
};

} // namespace

IrrepStream::IrrepStream(const LieGroup& g, bool include_trivial) {
    switch (g.kind()) {
    case GroupKind::SU2:
    case GroupKind::SO3: impl_ = std::make_unique<SpinStream>(g, include_trivial); break;
    case GroupKind::Torus: impl_ = std::make_unique<TorusStream>(g, include_trivial); break;
    case GroupKind::Product: impl_ = std::make_unique<ProductStream>(g, include_trivial); break;
    }
}

IrrepStream::IrrepStream(IrrepStream&&) noexcept = default;
IrrepStream& IrrepStream::operator=(IrrepStream&&) noexcept = default;
IrrepStream::~IrrepStream() = default;

double IrrepStream::peek_casimir() { return impl_->peek(); }
Irrep IrrepStream::next() { return impl_->next(); }

std::vector<Irrep> enumerate_irreps(const LieGroup& g, double casimir_cutoff) {
    if (!(casimir_cutoff > 0.0)) throw ValidationError("Casimir cutoff must be positive");
    IrrepStream stream(g);
    std::vector<Irrep> out;
    while (stream.peek_casimir() <= casimir_cutoff) out.push_back(stream.next());
    return out;
}

// --- Laplacian on irreps ----------------------------------------------------

CMatrix assemble_minus_ca(const Irrep& irrep, const Matrix& aat) {
    const auto& gens = *irrep.generators;
    const std::size_t m = gens.size();
    if (aat.rows() != m || aat.cols() != m) throw ValidationError("assemble_minus_ca: metric dimension mismatch");
    CMatrix out(irrep.dim, irrep.dim);
    for (std::size_t i = 0; i < m; ++i) {
        // W_i = Σ_j (A Aᵀ)_ij π(X_j)
        CMatrix w(irrep.dim, irrep.dim);
        for (std::size_t j = 0; j < m; ++j)
            if (aat(i, j) != 0.0) w += gens[j] * Complex(aat(i, j), 0.0);
        out -= gens[i] * w;
    }
    // exact hermitian symmetrization of rounding noise
    for (std::size_t r = 0; r < irrep.dim; ++r) {
        out(r, r) = out(r, r).real();
        for (std::size_t c = r + 1; c < irrep.dim; ++c) {
            const Complex avg = 0.5 * (out(r, c) + std::conj(out(c, r)));
            out(r, c) = avg;
            out(c, r) = std::conj(avg);
        }
    }
    return out;
}

CMatrix assemble_minus_ca(const Irrep& irrep, const MetricSpec& spec) { return assemble_minus_ca(irrep, spec.aat()); }

SpectralResult lambda1_certified(const LieGroup& g, const MetricSpec& spec, const CertifyOptions& options) {
    if (spec.dim() != g.dim()) throw ValidationError("lambda1_certified: metric dimension mismatch");
    const double smin2 = spec.sigma_min() * spec.sigma_min();
    IrrepStream stream(g);
    SpectralResult res;
    res.lambda1 = std::numeric_limits<double>::infinity();
    while (true) {
        const double c = stream.peek_casimir();
        if (std::isfinite(res.lambda1) && smin2 * c > res.lambda1) {
            res.certified = true;
            res.window = c;
            return res;
        }
        if (c > options.casimir_cap) {
            res.certified = false;
            res.window = c;
            std::ostringstream os;
            os << "Casimir window exceeded cap " << options.casimir_cap << " before certification (sigma_min^2 * "
               << c << " = " << smin2 * c << " <= best " << res.lambda1 << ")";
            res.diagnostics = os.str();
            return res;
        }
        const Irrep irrep = stream.next();
        ++res.evaluations;
        const CMatrix op = assemble_minus_ca(irrep, spec);
        // Skip the full eigensolve when op − λ̂·I is positive definite.
        if (std::isfinite(res.lambda1) && is_positive_definite_shifted(op, res.lambda1)) continue;
        const double lmin = lambda_min_hermitian(op);
        if (lmin < res.lambda1) {
            res.lambda1 = lmin;
            res.witness = irrep.label;
        }
    }
}

double lambda1_reference(const LieGroup& g) {
    IrrepStream stream(g);
    return stream.peek_casimir();
}

SpectralResult torus_lambda1(const LieGroup& g, const MetricSpec& spec) {
    if (g.kind() != GroupKind::Torus) throw ValidationError("torus_lambda1 requires a torus");
    const std::size_t m = g.dim();
    if (m > 4) throw ValidationError("torus_lambda1 supports m <= 4");
    if (spec.dim() != m) throw ValidationError("torus_lambda1: metric dimension mismatch");
    const Matrix& q = spec.aat();
    // start from the unit vectors, then search the box implied by σ_m
    double best = std::numeric_limits<double>::infinity();
    std::vector<long> witness;
    for (std::size_t j = 0; j < m; ++j)
        if (q(j, j) < best) {
            best = q(j, j);
            witness.assign(m, 0);
            witness[j] = 1;
        }
    const double smin2 = spec.sigma_min() * spec.sigma_min();
    const long r = static_cast<long>(std::ceil(std::sqrt(best / smin2)));
    std::vector<long> n(m, -r);
    Vector x(m);
    std::size_t evaluations = 0;
    while (true) {
        bool zero = true;
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = static_cast<double>(n[i]);
            zero = zero && n[i] == 0;
        }
        if (!zero) {
            ++evaluations;
            const double v = quadratic_form(q, x);
            if (v < best) {
                best = v;
                witness = n;
            }
        }
        std::size_t i = 0;
        while (i < m && n[i] == r) n[i++] = -r;
        if (i == m) break;
        ++n[i];
    }
    SpectralResult res;
    res.lambda1 = kFourPiSq * best;
    res.witness = IrrepLabel::chi(witness);
    res.certified = true;
    res.window = kFourPiSq * static_cast<double>(r * r);
    res.evaluations = evaluations;
    return res;
}

std::size_t invariant_dim(const Irrep& irrep, const Subalgebra& h) {
    if (h.dim() == 0) throw ValidationError("invariant_dim: subalgebra must be nonzero");
    const std::size_t d = irrep.dim;
    CMatrix stacked(h.dim() * d, d);
    for (std::size_t b = 0; b < h.dim(); ++b) {
        const CMatrix px = represent(irrep, h.basis[b]);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) stacked(b * d + r, c) = px(r, c);
    }
    if (max_abs(stacked) == 0.0) return d;
    return d - numerical_rank(stacked, kRankTolerance);
}

RestrictedSpectrum lambda1_restricted(const LieGroup& g, const Matrix& p, std::size_t k, double casimir_cap) {
    const std::size_t m = g.dim();
    if (k < 1 || k > m) throw ValidationError("lambda1_restricted requires 1 <= k <= m");
    if (p.rows() != m || p.cols() != m || !is_orthogonal(p, 1e-10))
        throw ValidationError("lambda1_restricted: P must be an orthogonal m x m matrix");
    IrrepStream stream(g);
    if (k == 1) {
        const Irrep first = stream.next();
        return {first.casimir, false, first.label};
    }
    const auto cols = rotated_basis(p);
    const Subalgebra h = generated_subalgebra(g, std::span(cols.data(), k - 1));
    if (h.dim() == m) return {};
    while (stream.peek_casimir() <= casimir_cap) {
        const Irrep irrep = stream.next();
        if (invariant_dim(irrep, h) > 0) return {irrep.casimir, false, irrep.label};
    }
    std::ostringstream os;
    os << "lambda1_restricted: no irrep with an invariant vector up to Casimir " << casimir_cap
       << " (prefix generates a subalgebra of dimension " << h.dim() << ")";
    throw ComputationError(os.str());
}

SubLaplacianResult sublaplacian_lambda1(const LieGroup& g, std::span<const Vector> h_basis, const Matrix& h,
                                        double window) {
    if (!(window > 0.0)) throw ValidationError("sub-Laplacian window must be positive");
    if (h_basis.empty()) throw ValidationError("sub-Laplacian needs a nonempty distribution basis");
    const std::size_t r = h_basis.size();
    if (h.rows() != r || h.cols() != r) throw ValidationError("Gram matrix size does not match distribution basis");
    for (const auto& v : h_basis)
        if (v.size() != g.dim()) throw ValidationError("distribution vector length mismatch");

    SubLaplacianResult res;
    res.window = window;
    if (!is_bracket_generating(g, h_basis)) {
        res.value = 0.0;
        res.reason = "H-invariant functions exist";
        return res;
    }
    // Y = B L^{-T} is h-orthonormal when h = L Lᵀ
    const Matrix linv_t = inverse(cholesky(h)).transpose();
    std::vector<Vector> y(r, Vector(g.dim(), 0.0));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < g.dim(); ++c) y[a][c] += h_basis[b][c] * linv_t(b, a);

    Matrix coeff(g.dim(), g.dim()); // Σ_a y_a y_aᵀ, so that −C = −Σ_ij coeff_ij π(X_i)π(X_j)
    for (const auto& ya : y)
        for (std::size_t i = 0; i < g.dim(); ++i)
            for (std::size_t j = 0; j < g.dim(); ++j) coeff(i, j) += ya[i] * ya[j];

    res.value = std::numeric_limits<double>::infinity();
    IrrepStream stream(g);
    while (stream.peek_casimir() <= window) {
        const Irrep irrep = stream.next();
        const double lmin = lambda_min_hermitian(assemble_minus_ca(irrep, coeff));
        if (lmin < res.value) {
            res.value = lmin;
            res.witness = irrep.label;
        }
    }
    res.reason = res.witness ? "window-limited" : "no irreps inside window";
    return res;
}

} // namespace liespec
