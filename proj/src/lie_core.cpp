#include "liespec/lie_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace liespec {

std::string_view to_string(GroupKind k) {
    switch (k) {
    case GroupKind::Torus: return "torus";
    case GroupKind::SU2: return "su2";
    case GroupKind::SO3: return "so3";
    case GroupKind::Product: return "product";
    }
    return "unknown";
}

namespace {

StructureConstants su2_constants() {
    StructureConstants c(3);
    // [X_i, X_{i+1}] = 2 X_{i+2}, indices mod 3
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
        c(i, j, k) = 2.0;
        c(j, i, k) = -2.0;
    }
    return c;
}

constexpr double kStructureTolerance = 1e-12;

} // namespace

LieGroup LieGroup::torus(std::size_t m) {
    if (m == 0) throw ValidationError("torus dimension must be positive");
    LieGroup g;
    g.kind_ = GroupKind::Torus;
    g.dim_ = m;
    g.k_max_ = m;
    g.semisimple_ = false;
    g.c_ = StructureConstants(m);
    g.key_ = "t" + std::to_string(m);
    g.validate();
    return g;
}

LieGroup LieGroup::su2() {
    LieGroup g;
    g.kind_ = GroupKind::SU2;
    g.dim_ = 3;
    g.k_max_ = su_n_k_max(2);
    g.semisimple_ = true;
    g.c_ = su2_constants();
    g.key_ = "su2";
    g.validate();
    return g;
}

LieGroup LieGroup::so3() {
    LieGroup g = su2();
    g.kind_ = GroupKind::SO3;
    g.key_ = "so3";
    return g;
}

LieGroup LieGroup::product(std::vector<LieGroup> factors, std::size_t k_max) {
    if (factors.size() < 2) throw ValidationError("product needs at least two factors");
    const bool any_abelian = std::any_of(factors.begin(), factors.end(), [](const LieGroup& f) { return f.abelian(); });
    const bool all_abelian = std::all_of(factors.begin(), factors.end(), [](const LieGroup& f) { return f.abelian(); });
    if (any_abelian && !all_abelian)
        throw ValidationError("products mixing torus and semisimple factors are not supported (k_max unknown)");
    for (const auto& f : factors)
        if (f.kind() == GroupKind::Product) throw ValidationError("nested products are not supported");

    LieGroup g;
    g.kind_ = GroupKind::Product;
    std::size_t m = 0;
    for (const auto& f : factors) {
        g.offsets_.push_back(m);
        m += f.dim();
    }
    g.dim_ = m;
    g.k_max_ = k_max;
    g.semisimple_ = !any_abelian;
    g.c_ = StructureConstants(m);
    std::string key;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto& cf = factors[f].structure_constants();
        const std::size_t off = g.offsets_[f];
        for (std::size_t i = 0; i < cf.dim(); ++i)
            for (std::size_t j = 0; j < cf.dim(); ++j)
                for (std::size_t k = 0; k < cf.dim(); ++k) g.c_(off + i, off + j, off + k) = cf(i, j, k);
        key += (f ? "x" : "") + factors[f].key();
    }
    g.key_ = key;
    g.factors_ = std::move(factors);
    g.validate();
    return g;
}

LieGroup LieGroup::from_structure_constants(GroupKind kind, StructureConstants c, std::size_t k_max,
                                            bool semisimple) {
    LieGroup g;
    g.kind_ = kind;
    g.dim_ = c.dim();
    g.k_max_ = k_max;
    g.semisimple_ = semisimple;
    g.c_ = std::move(c);
    g.key_ = "custom";
    g.validate();
    return g;
}

LieGroup LieGroup::from_key(std::string_view key) {
    if (key == "su2") return su2();
    if (key == "so3") return so3();
    if (key == "su2xsu2") return product({su2(), su2()}, 5);
    if (key.size() == 2 && key[0] == 't' && key[1] >= '1' && key[1] <= '4')
        return torus(static_cast<std::size_t>(key[1] - '0'));
    throw ValidationError("unknown group '" + std::string(key) + "' (known: t1..t4, su2, so3, su2xsu2)");
}

std::vector<std::string> LieGroup::catalog_keys() { return {"t1", "t2", "t3", "t4", "su2", "so3", "su2xsu2"}; }

void LieGroup::validate() const {
    const std::size_t m = dim_;
    if (c_.dim() != m) throw ValidationError("structure constants have wrong dimension");
    if (k_max_ < 1 || k_max_ > m) throw ValidationError("k_max out of range");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                if (std::abs(c_(i, j, k) + c_(j, i, k)) > kStructureTolerance) {
                    std::ostringstream os;
                    os << "structure constants not antisymmetric at (" << i << "," << j << "," << k << ")";
                    throw ValidationError(os.str());
                }
                if (std::abs(c_(i, j, k) + c_(i, k, j)) > kStructureTolerance) {
                    std::ostringstream os;
                    os << "reference inner product not ad-invariant at (" << i << "," << j << "," << k << ")";
                    throw ValidationError(os.str());
                }
            }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t r = 0; r < m; ++r) {
                    double s = 0.0;
                    for (std::size_t l = 0; l < m; ++l)
                        s += c_(i, j, l) * c_(l, k, r) + c_(j, k, l) * c_(l, i, r) + c_(k, i, l) * c_(l, j, r);
                    if (std::abs(s) > kStructureTolerance) {
                        std::ostringstream os;
                        os << "Jacobi identity fails at (" << i << "," << j << "," << k << "," << r << ")";
                        throw ValidationError(os.str());
                    }
                }
}

void check_k_max_catalog() {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ComputationError(std::string("k_max catalog inconsistency: ") + what);
    };
    require(su_n_k_max(2) == 2, "SU(n) formula at n=2");
    require(LieGroup::su2().k_max() == su_n_k_max(2), "SU(2)");
    require(LieGroup::so3().k_max() == 2, "SO(3)");
    for (std::size_t m = 1; m <= 4; ++m) require(LieGroup::torus(m).k_max() == m, "torus");
    require(LieGroup::from_key("su2xsu2").k_max() == 5, "SU(2)xSU(2)");
}

Vector bracket(const LieGroup& g, std::span<const double> x, std::span<const double> y) {
    const std::size_t m = g.dim();
    if (x.size() != m || y.size() != m) throw ValidationError("bracket: vector length does not match algebra dimension");
    Vector out(m, 0.0);
    if (g.abelian()) return out;
    const auto& c = g.structure_constants();
    for (std::size_t i = 0; i < m; ++i) {
        if (x[i] == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            const double w = x[i] * y[j];
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < m; ++k) out[k] += w * c(i, j, k);
        }
    }
    return out;
}

Subalgebra generated_subalgebra(const LieGroup& g, std::span<const Vector> generators) {
    if (generators.empty()) throw ValidationError("generated_subalgebra: empty generating set");
    for (const auto& v : generators)
        if (v.size() != g.dim()) throw ValidationError("generated_subalgebra: vector length mismatch");

    std::vector<Vector> basis = orthonormal_span(generators, kRankTolerance);
    while (true) {
        std::vector<Vector> candidates = basis;
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = i + 1; j < basis.size(); ++j) candidates.push_back(bracket(g, basis[i], basis[j]));
        std::vector<Vector> next = orthonormal_span(candidates, kRankTolerance);
        if (next.size() == basis.size()) break;
        basis = std::move(next);
    }
    return Subalgebra{std::move(basis)};
}

bool is_bracket_generating(const LieGroup& g, std::span<const Vector> generators) {
    return generated_subalgebra(g, generators).dim() == g.dim();
}

std::vector<Vector> rotated_basis(const Matrix& p) {
    std::vector<Vector> cols;
    cols.reserve(p.cols());
    for (std::size_t j = 0; j < p.cols(); ++j) cols.push_back(p.column(j));
    return cols;
}

namespace {

void require_orthogonal(const LieGroup& g, const Matrix& p) {
    if (p.rows() != g.dim() || p.cols() != g.dim())
        throw ValidationError("rotation has wrong size for this group");
    if (!is_orthogonal(p, 1e-10)) throw ValidationError("matrix is not orthogonal within 1e-10");
}

} // namespace

std::vector<std::size_t> prefix_generated_dims(const LieGroup& g, const Matrix& p) {
    require_orthogonal(g, p);
    const auto cols = rotated_basis(p);
    std::vector<std::size_t> dims;
    for (std::size_t k = 1; k <= cols.size(); ++k)
        dims.push_back(generated_subalgebra(g, std::span(cols.data(), k)).dim());
    return dims;
}

std::size_t ell_index(const LieGroup& g, const Matrix& p) {
    require_orthogonal(g, p);
    const std::size_t m = g.dim();
    if (g.abelian()) return m;
    const auto cols = rotated_basis(p);
    for (std::size_t k = 1; k <= m; ++k)
        if (is_bracket_generating(g, std::span(cols.data(), k))) return k;
    return m; // the full orthonormal frame always spans g
}

// --- quaternions / group elements -------------------------------------------

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion so3_canonical(Quaternion q) {
    const double comps[4] = {q.w, q.x, q.y, q.z};
    for (double c : comps) {
        if (c > 0) return q;
        if (c < 0) return -q;
    }
    return q;
}

Quaternion quaternion_exp(double x1, double x2, double x3) {
    const double theta = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
    // sin(θ)/θ with a series near zero
    const double sinc = theta < 1e-8 ? 1.0 - theta * theta / 6.0 : std::sin(theta) / theta;
    return {std::cos(theta), sinc * x1, sinc * x2, sinc * x3};
}

std::array<double, 3> quaternion_log(const Quaternion& q) {
    const double v = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    if (v == 0.0) {
        if (q.w >= 0) return {0, 0, 0};
        return {std::numbers::pi, 0, 0};
    }
    const double theta = std::atan2(v, q.w);
    const double f = theta / v;
    return {f * q.x, f * q.y, f * q.z};
}

namespace {

double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

Quaternion normalized(Quaternion q) {
    const double n = q.norm();
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

} // namespace

void check_element(const LieGroup& g, const GroupElement& a) {
    switch (g.kind()) {
    case GroupKind::Torus:
        if (!std::holds_alternative<Vector>(a.payload) || a.torus().size() != g.dim())
            throw ValidationError("element is not a torus point of the right dimension");
        return;
    case GroupKind::SU2:
    case GroupKind::SO3:
        if (!std::holds_alternative<Quaternion>(a.payload)) throw ValidationError("element is not a quaternion");
        if (std::abs(a.quaternion().norm() - 1.0) > 1e-12) throw ValidationError("quaternion is not unit norm");
        return;
    case GroupKind::Product:
        if (!std::holds_alternative<std::vector<GroupElement>>(a.payload) || a.parts().size() != g.factors().size())
            throw ValidationError("element does not match product structure");
        for (std::size_t f = 0; f < g.factors().size(); ++f) check_element(g.factors()[f], a.parts()[f]);
        return;
    }
}

GroupElement identity_element(const LieGroup& g) {
    switch (g.kind()) {
    case GroupKind::Torus: return {Vector(g.dim(), 0.0)};
    case GroupKind::SU2:
    case GroupKind::SO3: return {Quaternion::identity()};
    case GroupKind::Product: {
        std::vector<GroupElement> parts;
        for (const auto& f : g.factors()) parts.push_back(identity_element(f));
        return {std::move(parts)};
    }
    }
    throw ValidationError("unknown group kind");
}

GroupElement multiply(const LieGroup& g, const GroupElement& a, const GroupElement& b) {
    switch (g.kind()) {
    case GroupKind::Torus: {
        Vector r(g.dim());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = wrap_unit(a.torus()[i] + b.torus()[i]);
        return {std::move(r)};
    }
    case GroupKind::SU2: return {normalized(a.quaternion() * b.quaternion())};
    case GroupKind::SO3: return {so3_canonical(normalized(a.quaternion() * b.quaternion()))};
    case GroupKind::Product: {
        std::vector<GroupElement> parts;
        for (std::size_t f = 0; f < g.factors().size(); ++f)
            parts.push_back(multiply(g.factors()[f], a.parts()[f], b.parts()[f]));
        return {std::move(parts)};
    }
    }
    throw ValidationError("unknown group kind");
}

GroupElement inverse(const LieGroup& g, const GroupElement& a) {
    switch (g.kind()) {
    case GroupKind::Torus: {
        Vector r(g.dim());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = wrap_unit(-a.torus()[i]);
        return {std::move(r)};
    }
    case GroupKind::SU2: return {a.quaternion().conj()};
    case GroupKind::SO3: return {so3_canonical(a.quaternion().conj())};
    case GroupKind::Product: {
        std::vector<GroupElement> parts;
        for (std::size_t f = 0; f < g.factors().size(); ++f) parts.push_back(inverse(g.factors()[f], a.parts()[f]));
        return {std::move(parts)};
    }
    }
    throw ValidationError("unknown group kind");
}

GroupElement group_exp(const LieGroup& g, std::span<const double> x) {
    if (x.size() != g.dim()) throw ValidationError("group_exp: vector length mismatch");
    switch (g.kind()) {
    case GroupKind::Torus: {
        Vector r(x.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = wrap_unit(x[i]);
        return {std::move(r)};
    }
    case GroupKind::SU2: return {quaternion_exp(x[0], x[1], x[2])};
    case GroupKind::SO3: return {so3_canonical(quaternion_exp(x[0], x[1], x[2]))};
    case GroupKind::Product: {
        std::vector<GroupElement> parts;
        for (std::size_t f = 0; f < g.factors().size(); ++f) {
            const auto& fac = g.factors()[f];
            parts.push_back(group_exp(fac, x.subspan(g.factor_offset(f), fac.dim())));
        }
        return {std::move(parts)};
    }
    }
    throw ValidationError("unknown group kind");
}

LogResult group_log(const LieGroup& g, const GroupElement& a) {
    switch (g.kind()) {
    case GroupKind::Torus: {
        LogResult r;
        r.value.resize(g.dim());
        for (std::size_t i = 0; i < g.dim(); ++i) {
            double c = wrap_unit(a.torus()[i]);
            if (c > 0.5) c -= 1.0;
            if (c == 0.5) r.at_cut_locus = true;
            r.value[i] = c;
        }
        return r;
    }
    case GroupKind::SU2: {
        const Quaternion& q = a.quaternion();
        const bool cut = q.x == 0.0 && q.y == 0.0 && q.z == 0.0 && q.w < 0.0;
        const auto l = quaternion_log(q);
        return {Vector(l.begin(), l.end()), cut};
    }
    case GroupKind::SO3: {
        Quaternion q = a.quaternion();
        if (q.w < 0) q = -q;
        const bool cut = std::abs(q.w) < 1e-15;
        const auto l = quaternion_log(q);
        return {Vector(l.begin(), l.end()), cut};
    }
    case GroupKind::Product: {
        LogResult r;
        for (std::size_t f = 0; f < g.factors().size(); ++f) {
            LogResult part = group_log(g.factors()[f], a.parts()[f]);
            r.value.insert(r.value.end(), part.value.begin(), part.value.end());
            r.at_cut_locus = r.at_cut_locus || part.at_cut_locus;
        }
        return r;
    }
    }
    throw ValidationError("unknown group kind");
}

} // namespace liespec
