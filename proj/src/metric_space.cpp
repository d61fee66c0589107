#include "liespec/metric_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace liespec {

MetricSpec metric_from_matrix(const Matrix& a) {
    if (!a.square() || a.rows() == 0) throw ValidationError("metric matrix must be square and non-empty");
    for (double x : a.data())
        if (!std::isfinite(x)) throw ValidationError("metric matrix contains NaN or Inf");
    const std::size_t m = a.rows();
    const double scale = max_abs(a);
    if (std::abs(determinant(a)) <= kSingularThreshold * std::pow(scale, static_cast<double>(m)))
        throw SingularMatrixError("matrix is singular (|det A| <= 1e-10 * max|a_ij|^m)");

    MetricSpec s;
    s.a_ = a;
    s.aat_ = a * a.transpose();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) s.aat_(i, j) = s.aat_(j, i) = 0.5 * (s.aat_(i, j) + s.aat_(j, i));

    const SymmetricEigen eig = jacobi_eigen_descending(s.aat_, 1e-13);
    s.sigma_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!(eig.values[k] > 0.0)) throw SingularMatrixError("A Aᵀ is not positive definite");
        s.sigma_[k] = std::sqrt(eig.values[k]);
    }
    s.p_sort_ = eig.vectors;
    s.gram_ = inverse(s.aat_);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) s.gram_(i, j) = s.gram_(j, i) = 0.5 * (s.gram_(i, j) + s.gram_(j, i));
    return s;
}

CanonicalForm canonical_form(const MetricSpec& spec) {
    return {spec.sorting_rotation(), Matrix::diagonal(std::span<const double>(spec.sigma()))};
}

bool loewner_leq(const MetricSpec& a, const MetricSpec& b) {
    if (a.dim() != b.dim()) throw ValidationError("loewner_leq: dimension mismatch");
    const Matrix diff = b.aat() - a.aat();
    const Vector ev = jacobi_eigen(diff, 1e-14).values;
    const double lmin = *std::min_element(ev.begin(), ev.end());
    return lmin >= -1e-10 * frobenius_norm(b.aat());
}

// --- Rng ------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

Matrix random_orthogonal(std::size_t m, Rng& rng) {
    Matrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g(i, j) = rng.normal();
    return qr_orthogonal_factor(g);
}

Matrix random_rotation(std::size_t m, Rng& rng) {
    Matrix q = random_orthogonal(m, rng);
    if (determinant(q) < 0)
        for (std::size_t i = 0; i < m; ++i) q(i, 0) = -q(i, 0);
    return q;
}

namespace {

Vector sample_sigmas(std::size_t m, const SamplerConfig& cfg, Rng& rng) {
    if (!(cfg.lo > 0.0) || !(cfg.lo <= cfg.hi) || !std::isfinite(cfg.hi))
        throw ValidationError("sampler range must satisfy 0 < lo <= hi");
    Vector s(m);
    const double llo = std::log(cfg.lo), lhi = std::log(cfg.hi);
    for (auto& x : s) x = cfg.lo == cfg.hi ? cfg.lo : std::exp(rng.uniform(llo, lhi));
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

} // namespace

MetricSpec sample_metric(const LieGroup& g, const SamplerConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t m = g.dim();
    const Vector s = sample_sigmas(m, cfg, rng);
    const Matrix p = cfg.random_rotation ? random_rotation(m, rng) : Matrix::identity(m);
    return metric_from_matrix(p * Matrix::diagonal(std::span<const double>(s)));
}

// --- restricted classes -------------------------------------------------

Matrix random_block_orthogonal(std::size_t m, std::size_t k, Rng& rng) {
    if (k < 1 || k > m) throw ValidationError("block shape requires 1 <= k <= m");
    Matrix q(m, m);
    const Matrix q1 = random_orthogonal(k - 1, rng);
    const Matrix q2 = random_orthogonal(m - k, rng);
    for (std::size_t i = 0; i + 1 < k; ++i)
        for (std::size_t j = 0; j + 1 < k; ++j) q(i, j) = q1(i, j);
    q(k - 1, k - 1) = 1.0;
    for (std::size_t i = 0; i < m - k; ++i)
        for (std::size_t j = 0; j < m - k; ++j) q(k + i, k + j) = q2(i, j);
    return q;
}

namespace {

void require_rotation_shape(const LieGroup& g, const Matrix& p) {
    if (p.rows() != g.dim() || p.cols() != g.dim()) throw ValidationError("class rotation has wrong size");
    if (!is_orthogonal(p, 1e-10)) throw ValidationError("class rotation is not orthogonal");
}

/// Pᵀ (A Aᵀ) P
Matrix rotated_aat(const Matrix& p, const MetricSpec& spec) { return p.transpose() * spec.aat() * p; }

} // namespace

bool class_member(const LieGroup& g, const MetricClassSpec& cls, const MetricSpec& spec) {
    if (spec.dim() != g.dim()) throw ValidationError("class_member: dimension mismatch");
    if (const auto* sr = std::get_if<SigmaRatioClass>(&cls)) {
        if (sr->c0 < 1.0) throw ValidationError("Sigma(c0) requires c0 >= 1");
        if (g.dim() < 2) return true;
        return spec.sigma_k(2) <= sr->c0 * spec.sigma_k(g.k_max()) * (1.0 + 1e-12);
    }
    const double tol = 1e-9 * frobenius_norm(spec.aat());
    if (const auto* dc = std::get_if<DiagonalClass>(&cls)) {
        require_rotation_shape(g, dc->p);
        const Matrix r = rotated_aat(dc->p, spec);
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < r.cols(); ++j)
                if (i != j && std::abs(r(i, j)) > tol) return false;
        return true;
    }
    const auto& cp = std::get<ClassOfP>(cls);
    require_rotation_shape(g, cp.p);
    // Pᵀ A Aᵀ P = Q D² Qᵀ must be blockdiag(k−1, 1, m−k) with the blocks'
    // spectra ordered: spec(block1) ≥ middle ≥ spec(block2).
    const std::size_t m = g.dim();
    const std::size_t k = ell_index(g, cp.p);
    const Matrix r = rotated_aat(cp.p, spec);
    auto block_of = [&](std::size_t i) { return i + 1 < k ? 0 : (i + 1 == k ? 1 : 2); };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (block_of(i) != block_of(j) && std::abs(r(i, j)) > tol) return false;
    auto block_eigs = [&](std::size_t from, std::size_t to) {
        Matrix b(to - from, to - from);
        for (std::size_t i = from; i < to; ++i)
            for (std::size_t j = from; j < to; ++j) b(i - from, j - from) = r(i, j);
        return b.rows() ? jacobi_eigen(b, 1e-14).values : Vector{};
    };
    const Vector top = block_eigs(0, k - 1);
    const Vector bottom = block_eigs(k, m);
    const double mid = r(k - 1, k - 1);
    for (double e : top)
        if (e < mid - tol) return false;
    for (double e : bottom)
        if (e > mid + tol) return false;
    return true;
}

MetricSpec class_build(const LieGroup& g, const MetricClassSpec& cls, const ClassBuildParams& params,
                       std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t m = g.dim();
    if (const auto* sr = std::get_if<SigmaRatioClass>(&cls)) {
        if (sr->c0 < 1.0) throw ValidationError("Sigma(c0) requires c0 >= 1");
        Vector s = sample_sigmas(m, params.sigma_range, rng);
        if (m >= 2)
            for (std::size_t k = 3; k <= g.k_max(); ++k) s[k - 1] = std::max(s[k - 1], s[1] / sr->c0);
        const Matrix p = random_rotation(m, rng);
        return metric_from_matrix(p * Matrix::diagonal(std::span<const double>(s)));
    }
    if (const auto* dc = std::get_if<DiagonalClass>(&cls)) {
        require_rotation_shape(g, dc->p);
        Vector s = sample_sigmas(m, params.sigma_range, rng);
        // arbitrary order: Fisher-Yates with the seeded stream
        for (std::size_t i = m; i > 1; --i) std::swap(s[i - 1], s[rng.next_u64() % i]);
        return metric_from_matrix(dc->p * Matrix::diagonal(std::span<const double>(s)));
    }
    const auto& cp = std::get<ClassOfP>(cls);
    require_rotation_shape(g, cp.p);
    const std::size_t k = ell_index(g, cp.p);
    const Vector s = sample_sigmas(m, params.sigma_range, rng);
    const Matrix q = random_block_orthogonal(m, k, rng);
    return metric_from_matrix(cp.p * q * Matrix::diagonal(std::span<const double>(s)));
}

// --- text format ----------------------------------------------------------

namespace {

double parse_finite(std::string_view tok) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ValidationError("invalid number '" + std::string(tok) + "'");
    if (!std::isfinite(v)) throw ValidationError("non-finite number '" + std::string(tok) + "'");
    return v;
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

} // namespace

Matrix parse_matrix_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("matrix file: missing dimension line");
    const auto head = split_tokens(line);
    if (head.size() != 1) throw ValidationError("matrix file: first line must be a single integer m");
    std::size_t m = 0;
    {
        const auto& t = head[0];
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), m);
        if (ec != std::errc{} || ptr != t.data() + t.size() || m == 0)
            throw ValidationError("matrix file: invalid dimension '" + t + "'");
    }
    Matrix a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::getline(in, line)) throw ValidationError("matrix file: expected " + std::to_string(m) + " rows");
        const auto toks = split_tokens(line);
        if (toks.size() != m)
            throw ValidationError("matrix file: row " + std::to_string(i + 1) + " has " + std::to_string(toks.size()) +
                                  " entries, expected " + std::to_string(m));
        for (std::size_t j = 0; j < m; ++j) a(i, j) = parse_finite(toks[j]);
    }
    while (std::getline(in, line))
        if (!split_tokens(line).empty()) throw ValidationError("matrix file: trailing data after matrix rows");
    return a;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
    return parse_matrix_text(in);
}

Matrix parse_inline_matrix(std::string_view text) {
    const auto toks = split_tokens(text);
    const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(toks.size()))));
    if (toks.empty() || m * m != toks.size())
        throw ValidationError("inline matrix must have a square number of entries, got " + std::to_string(toks.size()));
    Matrix a(m, m);
    for (std::size_t k = 0; k < toks.size(); ++k) a(k / m, k % m) = parse_finite(toks[k]);
    return a;
}

void write_matrix_text(std::ostream& out, const Matrix& a) {
    out << a.rows() << '\n';
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
        out << '\n';
    }
    out.precision(old);
}

} // namespace liespec
