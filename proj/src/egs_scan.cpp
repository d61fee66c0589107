#include "liespec/egs_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace liespec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLiConstant = kPi * kPi / 4.0;
constexpr double kRelTol = 1e-9;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool net_method(DiameterMethod m) { return m == DiameterMethod::GeodesicGraph; }

} // namespace

std::string_view to_string(DiamMethodChoice c) {
    switch (c) {
    case DiamMethodChoice::Auto: return "auto";
    case DiamMethodChoice::Graph: return "graph";
    case DiamMethodChoice::Lattice: return "lattice";
    case DiamMethodChoice::BiInvariant: return "biinv";
    case DiamMethodChoice::Bounds: return "bounds";
    }
    return "auto";
}

DiamMethodChoice parse_diam_method(std::string_view text) {
    for (auto c : {DiamMethodChoice::Auto, DiamMethodChoice::Graph, DiamMethodChoice::Lattice,
                   DiamMethodChoice::BiInvariant, DiamMethodChoice::Bounds})
        if (to_string(c) == text) return c;
    throw ValidationError("unknown diameter method '" + std::string(text) + "' (auto, graph, lattice, biinv, bounds)");
}

namespace {

DiamMethodChoice resolve(const LieGroup& g, DiamMethodChoice c) {
    if (c != DiamMethodChoice::Auto) return c;
    switch (g.kind()) {
    case GroupKind::Torus: return g.dim() <= 3 ? DiamMethodChoice::Lattice : DiamMethodChoice::Bounds;
    case GroupKind::SU2:
    case GroupKind::SO3: return DiamMethodChoice::Graph;
    case GroupKind::Product: return DiamMethodChoice::Bounds;
    }
    return DiamMethodChoice::Bounds;
}

} // namespace

bool needs_net(const LieGroup& g, const DiamConfig& cfg) { return resolve(g, cfg.method) == DiamMethodChoice::Graph; }

DiameterEstimate estimate_diameter(const LieGroup& g, const MetricSpec& spec, const DiamConfig& cfg, const Net* net) {
    if (spec.dim() != g.dim()) throw ValidationError("metric dimension does not match the group");
    switch (resolve(g, cfg.method)) {
    case DiamMethodChoice::Lattice:
        if (g.kind() != GroupKind::Torus) throw ValidationError("lattice method needs a torus");
        return torus_diameter(g, spec, cfg.grid_resolution);
    case DiamMethodChoice::Graph: {
        if (net) return graph_diameter(g, spec, *net, cfg.eps_net);
        const Net built = cached_net(g, cfg.net_size, cfg.knn, cfg.net_seed);
        return graph_diameter(g, spec, built, cfg.eps_net);
    }
    case DiamMethodChoice::BiInvariant: {
        if (spec.sigma_max() - spec.sigma_min() > 1e-12 * spec.sigma_max())
            throw ValidationError("biinv method needs A Aᵀ proportional to the identity");
        DiameterEstimate est = biinvariant_diameter(g);
        const double c = spec.sigma_max();
        est.value /= c;
        est.lower /= c;
        est.upper /= c;
        if (est.farthest_point && g.kind() == GroupKind::Torus) est.notes = "scaled bi-invariant closed form";
        return est;
    }
    case DiamMethodChoice::Bounds:
    case DiamMethodChoice::Auto: {
        const DiameterBounds b = analytic_diameter_bounds(g, spec);
        DiameterEstimate est;
        est.method = DiameterMethod::AnalyticBounds;
        est.lower = b.lower.value;
        est.upper = b.upper.value;
        est.value = b.upper.value;
        est.notes = "lower: " + b.lower.source + "; upper: " + b.upper.source;
        return est;
    }
    }
    throw ValidationError("unknown diameter method");
}

// --- ratio --------------------------------------------------------------------

ScanRecord egs_ratio(const LieGroup& g, const MetricSpec& spec, const DiamConfig& cfg, const Net* net,
                     std::uint64_t seed) {
    const SpectralResult lam = lambda1_certified(g, spec);
    const DiameterEstimate diam = estimate_diameter(g, spec, cfg, net);

    ScanRecord r;
    r.seed = seed;
    r.group = g.key();
    r.m = g.dim();
    r.sigma = spec.sigma();
    r.lambda1 = lam.lambda1;
    r.lambda1_certified = lam.certified;
    r.lambda1_witness = lam.witness.to_string();
    r.diam_lower = diam.lower;
    r.diam_value = diam.value;
    r.diam_upper = diam.upper;
    r.diam_method = diam.method;
    r.ratio = lam.lambda1 * diam.value * diam.value;
    r.a = spec.a();

    const double l = lam.lambda1;
    const double l0 = lambda1_reference(g);
    const double s1 = spec.sigma_max(), sm = spec.sigma_min();
    const bool net_based = net_method(diam.method);

    // λ_1·diam² from below, on the conservative side of the bracket
    r.checks.li_ok = l * diam.lower * diam.lower >= kLiConstant - kExactTolerance;

    // does the estimate fit inside [lo, hi] within the pipeline's tolerance?
    auto diam_within = [&](double lo, double hi) {
        if (net_based) return diam.value >= lo * (1.0 - kNetTolerance) && diam.value <= hi * (1.0 + kNetTolerance);
        return diam.upper >= lo - kExactTolerance && diam.lower <= hi + kExactTolerance;
    };

    const double d0 = biinvariant_diameter(g).value;
    const bool lambda_simple = l >= sm * sm * l0 * (1.0 - kRelTol) && l <= s1 * s1 * l0 * (1.0 + kRelTol);
    r.checks.simple_bounds_ok = lambda_simple && diam_within(d0 / s1, d0 / sm);

    if (g.kind() == GroupKind::SU2 || g.kind() == GroupKind::SO3) {
        const double s2 = spec.sigma_k(2);
        const double lo_factor = g.kind() == GroupKind::SU2 ? 2.0 : 4.0;
        r.checks.remark_lambda_ok = l > lo_factor * s2 * s2 && l <= 8.0 * s2 * s2 * (1.0 + kRelTol);
        const double hi = g.kind() == GroupKind::SU2 ? kPi / s2 : std::sqrt(3.0) * kPi / 2.0 / s2;
        r.checks.remark_diam_ok = diam_within(kPi / 2.0 / s2, hi);
    }

    r.checks.urakawa_ok = l <= l0 * trace(spec.aat()) * (1.0 + kRelTol);
    return r;
}

// --- scan -------------------------------------------------------------------

std::string reproduce_command(const LieGroup& g, const ScanOptions& options, std::uint64_t seed) {
    std::ostringstream os;
    os << "liespec scan --group " << g.key() << " --samples 1 --seed " << seed << " --sigma-lo "
       << fmt(options.sampler.lo) << " --sigma-hi " << fmt(options.sampler.hi);
    if (!options.sampler.random_rotation) os << " --no-rotation";
    os << " --method " << to_string(options.diam.method) << " --net-size " << options.diam.net_size << " --knn "
       << options.diam.knn << " --net-seed " << options.diam.net_seed << " --grid " << options.diam.grid_resolution
       << " --eps-net " << fmt(options.diam.eps_net);
    return os.str();
}

ScanResult scan(const LieGroup& g, const ScanOptions& options) {
    if (options.n_samples == 0) throw ValidationError("scan needs at least one sample");
    std::optional<Net> net;
    if (needs_net(g, options.diam))
        net = cached_net(g, options.diam.net_size, options.diam.knn, options.diam.net_seed);
    const Net* net_ptr = net ? &*net : nullptr;

    ScanResult out;
    out.records.resize(options.n_samples);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= options.n_samples) return;
            try {
                const std::uint64_t seed = options.base_seed + i;
                const MetricSpec spec = sample_metric(g, options.sampler, seed);
                out.records[i] = egs_ratio(g, spec, options.diam, net_ptr, seed);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = options.n_samples;
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, options.n_samples);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    ScanSummary& s = out.summary;
    s.samples = out.records.size();
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        const ScanRecord& r = out.records[i];
        if (i == 0 || r.ratio > s.max_ratio) {
            s.max_ratio = r.ratio;
            s.argmax = i;
            s.argmax_sigma = r.sigma;
        }
        if (!r.lambda1_certified) ++s.uncertified;
        ScanViolation v;
        auto count = [&](bool ok, std::size_t& counter, const char* name) {
            if (ok) return;
            ++counter;
            v.failed.emplace_back(name);
        };
        count(r.checks.li_ok, s.li_violations, "li_ok");
        count(r.checks.simple_bounds_ok, s.simple_bounds_violations, "simple_bounds_ok");
        count(r.checks.remark_diam_ok, s.remark_diam_violations, "remark_diam_ok");
        count(r.checks.remark_lambda_ok, s.remark_lambda_violations, "remark_lambda_ok");
        count(r.checks.urakawa_ok, s.urakawa_violations, "urakawa_ok");
        if (!v.failed.empty()) {
            v.index = i;
            v.reproduce = reproduce_command(g, options, r.seed);
            s.violations.push_back(std::move(v));
        }
    }
    return out;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records) {
    const std::size_t m = records.empty() ? 0 : records.front().m;
    out << "seed,group,m";
    for (std::size_t k = 1; k <= m; ++k) out << ",sigma_" << k;
    out << ",lambda1,lambda1_certified,lambda1_witness,diam_lower,diam_value,diam_upper,diam_method,ratio,"
           "li_ok,simple_bounds_ok,remark_diam_ok,remark_lambda_ok,urakawa_ok\n";
    auto b = [](bool x) { return x ? "true" : "false"; };
    for (const auto& r : records) {
        out << r.seed << ',' << r.group << ',' << r.m;
        for (double s : r.sigma) out << ',' << fmt(s);
        out << ',' << fmt(r.lambda1) << ',' << b(r.lambda1_certified) << ",\"" << r.lambda1_witness << "\","
            << fmt(r.diam_lower) << ',' << fmt(r.diam_value) << ',' << fmt(r.diam_upper) << ','
            << to_string(r.diam_method) << ',' << fmt(r.ratio) << ',' << b(r.checks.li_ok) << ','
            << b(r.checks.simple_bounds_ok) << ',' << b(r.checks.remark_diam_ok) << ','
            << b(r.checks.remark_lambda_ok) << ',' << b(r.checks.urakawa_ok) << '\n';
    }
}

namespace {

nlohmann::json matrix_json(const Matrix& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
    return rows;
}

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

} // namespace

void write_scan_json(std::ostream& out, const ScanResult& result) {
    nlohmann::json j;
    j["schema_version"] = 1;
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : result.records) {
        nlohmann::json x;
        x["seed"] = r.seed;
        x["group"] = r.group;
        x["m"] = r.m;
        for (std::size_t k = 0; k < r.sigma.size(); ++k) x["sigma_" + std::to_string(k + 1)] = r.sigma[k];
        x["lambda1"] = finite_or_null(r.lambda1);
        x["lambda1_certified"] = r.lambda1_certified;
        x["lambda1_witness"] = r.lambda1_witness;
        x["diam_lower"] = finite_or_null(r.diam_lower);
        x["diam_value"] = finite_or_null(r.diam_value);
        x["diam_upper"] = finite_or_null(r.diam_upper);
        x["diam_method"] = std::string(to_string(r.diam_method));
        x["ratio"] = finite_or_null(r.ratio);
        x["li_ok"] = r.checks.li_ok;
        x["simple_bounds_ok"] = r.checks.simple_bounds_ok;
        x["remark_diam_ok"] = r.checks.remark_diam_ok;
        x["remark_lambda_ok"] = r.checks.remark_lambda_ok;
        x["urakawa_ok"] = r.checks.urakawa_ok;
        x["a"] = matrix_json(r.a);
        recs.push_back(std::move(x));
    }
    j["records"] = std::move(recs);
    const ScanSummary& s = result.summary;
    nlohmann::json sum;
    sum["samples"] = s.samples;
    sum["max_ratio"] = finite_or_null(s.max_ratio);
    sum["argmax"] = s.argmax;
    sum["argmax_sigma"] = s.argmax_sigma;
    sum["uncertified"] = s.uncertified;
    sum["violations"] = {{"li_ok", s.li_violations},
                         {"simple_bounds_ok", s.simple_bounds_violations},
                         {"remark_diam_ok", s.remark_diam_violations},
                         {"remark_lambda_ok", s.remark_lambda_violations},
                         {"urakawa_ok", s.urakawa_violations}};
    nlohmann::json viol = nlohmann::json::array();
    for (const auto& v : s.violations) viol.push_back({{"index", v.index}, {"failed", v.failed}, {"reproduce", v.reproduce}});
    sum["violation_records"] = std::move(viol);
    j["summary"] = std::move(sum);
    out << j.dump(2) << '\n';
}

// --- degeneration -------------------------------------------------------------

std::string_view to_string(DegenerationKind k) {
    switch (k) {
    case DegenerationKind::ShrinkTransverseToSubgroup: return "shrink-transverse";
    case DegenerationKind::EnlargeGeneratingTriple: return "enlarge-triple";
    case DegenerationKind::TorusDenseLine: return "dense-line";
    }
    return "shrink-transverse";
}

DegenerationKind parse_degeneration_kind(std::string_view text) {
    for (auto k : {DegenerationKind::ShrinkTransverseToSubgroup, DegenerationKind::EnlargeGeneratingTriple,
                   DegenerationKind::TorusDenseLine})
        if (to_string(k) == text) return k;
    throw ValidationError("unknown degeneration kind '" + std::string(text) +
                          "' (shrink-transverse, enlarge-triple, dense-line)");
}

std::vector<double> default_s_values(DegenerationKind kind) {
    switch (kind) {
    case DegenerationKind::ShrinkTransverseToSubgroup: return {1.0, 0.5, 0.25, 0.125};
    case DegenerationKind::EnlargeGeneratingTriple: return {1.0, 2.0, 4.0};
    case DegenerationKind::TorusDenseLine: return {1.0, 4.0, 16.0};
    }
    return {};
}

namespace {

void require_kind_fits(const LieGroup& g, DegenerationKind kind) {
    const bool ok = [&] {
        switch (kind) {
        case DegenerationKind::ShrinkTransverseToSubgroup: return g.key() == "su2" || g.key() == "su2xsu2";
        case DegenerationKind::EnlargeGeneratingTriple: return g.key() == "su2xsu2";
        case DegenerationKind::TorusDenseLine: return g.key() == "t2";
        }
        return false;
    }();
    if (!ok)
        throw ValidationError(std::string(to_string(kind)) + " is not available for group '" + g.key() +
                              "' (shrink-transverse: su2, su2xsu2; enlarge-triple: su2xsu2; dense-line: t2)");
}

} // namespace

Matrix degeneration_frame(const LieGroup& g, DegenerationKind kind) {
    require_kind_fits(g, kind);
    switch (kind) {
    case DegenerationKind::ShrinkTransverseToSubgroup: return Matrix::identity(g.dim());
    case DegenerationKind::EnlargeGeneratingTriple: {
        // Y1 = cX1 + sX1', Y2 = sX2 + cX2' with c ≠ s, so no automorphism of
        // su(2) carries one component into the other and Y1, Y2 generate
        // su(2)⊕su(2). Y3 ∝ [Y1, Y2].
        const double c = std::cos(kPi / 6.0), s = std::sin(kPi / 6.0);
        std::vector<Vector> frame{{c, 0, 0, s, 0, 0}, {0, s, 0, 0, c, 0}};
        Vector y3 = bracket(g, frame[0], frame[1]);
        const double n3 = norm(y3);
        for (auto& v : y3) v /= n3;
        frame.push_back(y3);
        for (std::size_t i = 0; i < 6; ++i) {
            Vector e(6, 0.0);
            e[i] = 1.0;
            frame.push_back(e);
        }
        const auto basis = orthonormal_span(frame, 1e-10);
        Matrix p(6, 6);
        for (std::size_t j = 0; j < 6; ++j) p.set_column(j, basis[j]);
        if (!is_bracket_generating(g, std::span<const Vector>(basis.data(), 3)))
            throw ComputationError("enlarge-triple frame is not bracket generating");
        return p;
    }
    case DegenerationKind::TorusDenseLine: {
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        const double n = std::sqrt(1.0 + phi * phi);
        return Matrix{{1.0 / n, -phi / n}, {phi / n, 1.0 / n}};
    }
    }
    throw ValidationError("unknown degeneration kind");
}

DegenerationReport degeneration_experiment(const LieGroup& g, DegenerationKind kind, std::vector<double> s_values,
                                           const DiamConfig& cfg, const Net* net) {
    require_kind_fits(g, kind);
    if (s_values.empty()) throw ValidationError("degeneration sweep needs at least one s value");
    for (double s : s_values)
        if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("s values must be positive and finite");
    if (kind == DegenerationKind::ShrinkTransverseToSubgroup)
        std::sort(s_values.begin(), s_values.end(), std::greater<>());
    else
        std::sort(s_values.begin(), s_values.end());

    DegenerationReport rep;
    rep.kind = kind;
    rep.group = g.key();
    rep.p = degeneration_frame(g, kind);
    const std::size_t m = g.dim();
    const bool has_diam = g.kind() != GroupKind::Product;

    std::optional<Net> own_net;
    if (has_diam && !net && needs_net(g, cfg)) {
        own_net = cached_net(g, cfg.net_size, cfg.knn, cfg.net_seed);
        net = &*own_net;
    }

    switch (kind) {
    case DegenerationKind::ShrinkTransverseToSubgroup: rep.tracked_name = "lambda1/sigma_kmax^2"; break;
    case DegenerationKind::EnlargeGeneratingTriple: rep.tracked_name = "lambda1"; break;
    case DegenerationKind::TorusDenseLine: rep.tracked_name = "diam*sigma_2"; break;
    }

    for (double s : s_values) {
        Vector d(m, 1.0);
        switch (kind) {
        case DegenerationKind::ShrinkTransverseToSubgroup:
            for (std::size_t i = g.k_max() - 1; i < m; ++i) d[i] = s;
            break;
        case DegenerationKind::EnlargeGeneratingTriple:
            for (std::size_t i = 0; i < 3; ++i) d[i] = s;
            break;
        case DegenerationKind::TorusDenseLine: d[0] = s; break;
        }
        const MetricSpec spec = metric_from_matrix(rep.p * Matrix::diagonal(std::span<const double>(d)));
        DegenerationRow row;
        row.s = s;
        row.sigma = spec.sigma();
        const SpectralResult lam = lambda1_certified(g, spec);
        row.lambda1 = lam.lambda1;
        row.lambda1_certified = lam.certified;
        if (has_diam) row.diam = estimate_diameter(g, spec, cfg, net);
        switch (kind) {
        case DegenerationKind::ShrinkTransverseToSubgroup: {
            const double sk = spec.sigma_k(g.k_max());
            row.tracked = row.lambda1 / (sk * sk);
            break;
        }
        case DegenerationKind::EnlargeGeneratingTriple: row.tracked = row.lambda1; break;
        case DegenerationKind::TorusDenseLine: row.tracked = row.diam->value * spec.sigma_k(2); break;
        }
        rep.rows.push_back(std::move(row));
    }

    auto strictly = [&](auto&& get, bool increasing) {
        for (std::size_t i = 1; i < rep.rows.size(); ++i) {
            const double a = get(rep.rows[i - 1]), b = get(rep.rows[i]);
            if (increasing ? !(b > a) : !(b < a)) return false;
        }
        return true;
    };
    auto lam = [](const DegenerationRow& r) { return r.lambda1; };
    rep.lambda1_strictly_decreasing = strictly(lam, false);
    rep.lambda1_strictly_increasing = strictly(lam, true);
    rep.diam_strictly_increasing = has_diam && strictly([](const DegenerationRow& r) { return r.diam->value; }, true);
    rep.tracked_strictly_decreasing = strictly([](const DegenerationRow& r) { return r.tracked; }, false);
    return rep;
}

// --- property suite -----------------------------------------------------------

bool PropertyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

double cab_identity_residual(const Irrep& irrep, const Matrix& a, const Matrix& b) {
    const std::size_t m = a.rows();
    if (irrep.generators->size() != m || b.rows() != m) throw ValidationError("C_AB identity: dimension mismatch");
    std::vector<CMatrix> xa;
    for (std::size_t j = 0; j < m; ++j) xa.push_back(represent(irrep, a.column(j)));
    const Matrix bbt = b * b.transpose();
    CMatrix lhs(irrep.dim, irrep.dim);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            CMatrix t = xa[i] * xa[j];
            t *= Complex(bbt(i, j), 0.0);
            lhs += t;
        }
    const Matrix ab = a * b;
    CMatrix rhs = assemble_minus_ca(irrep, ab * ab.transpose());
    rhs *= Complex(-1.0, 0.0);
    lhs -= rhs;
    return max_abs(lhs);
}

namespace {

std::string matrix_text(const Matrix& a) {
    std::ostringstream os;
    write_matrix_text(os, a);
    return os.str();
}

class Checker {
public:
    explicit Checker(std::string name) { check_.name = std::move(name); }
    void trial() { ++check_.trials; }
    void fail(const std::string& detail) {
        if (check_.passed) check_.detail = detail;
        check_.passed = false;
    }
    void skip(const std::string& why) {
        check_.skipped = true;
        check_.detail = why;
    }
    bool skipped() const { return check_.skipped; }
    PropertyCheck done() { return std::move(check_); }

private:
    PropertyCheck check_;
};

/// B with B Bᵀ = A Aᵀ + C Cᵀ for a random C.
MetricSpec loewner_larger(const MetricSpec& a, Rng& rng) {
    const std::size_t m = a.dim();
    Matrix c(m, m);
    for (double& x : c.data()) x = 0.5 * rng.normal() * a.sigma_min();
    Matrix target = a.aat() + c * c.transpose();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) target(i, j) = target(j, i) = 0.5 * (target(i, j) + target(j, i));
    return metric_from_matrix(cholesky(target));
}

std::vector<Irrep> test_irreps(const LieGroup& g) {
    if (g.kind() == GroupKind::SU2 || g.kind() == GroupKind::SO3) {
        const LieGroup su2 = LieGroup::su2();
        return {make_irrep(su2, IrrepLabel::spin(1)), make_irrep(su2, IrrepLabel::spin(2)),
                make_irrep(su2, IrrepLabel::spin(3))};
    }
    IrrepStream stream(g);
    std::vector<Irrep> out;
    for (int i = 0; i < 4; ++i) out.push_back(stream.next());
    return out;
}

} // namespace

PropertyReport property_suite(const LieGroup& g, std::size_t n_trials, std::uint64_t seed,
                              const PropertyOptions& options) {
    if (n_trials == 0) throw ValidationError("property suite needs at least one trial");
    PropertyReport rep;
    rep.group = g.key();
    const std::size_t m = g.dim();
    const SamplerConfig sampler{0.2, 5.0, true};
    const double l0 = lambda1_reference(g);

    {
        Checker c("structure constants valid");
        c.trial();
        try {
            g.validate();
        } catch (const ValidationError& e) {
            c.fail(e.what());
        }
        rep.checks.push_back(c.done());
    }
    {
        Checker c("perturbed structure constants rejected");
        c.trial();
        StructureConstants bad = g.structure_constants();
        const std::size_t j = m > 1 ? 1 : 0;
        bad(0, j, 0) += 1e-3;
        if (j != 0) bad(j, 0, 0) -= 1e-3;
        try {
            (void)LieGroup::from_structure_constants(g.kind(), bad, g.k_max(), g.semisimple());
            c.fail("perturbation of c(0," + std::to_string(j) + ",0) was accepted");
        } catch (const ValidationError&) {
        }
        rep.checks.push_back(c.done());
    }
    {
        Checker c("irrep generators: anti-hermitian, bracket relations, scalar Casimir");
        for (const Irrep& irrep : enumerate_irreps(g, 6.0 * l0)) {
            c.trial();
            const double tol = 1e-10 * std::max(1.0, irrep.casimir);
            for (std::size_t i = 0; i < m; ++i) {
                CMatrix s = irrep.generator(i) + adjoint(irrep.generator(i));
                if (max_abs(s) > tol) c.fail(irrep.label.to_string() + ": generator not anti-hermitian");
                for (std::size_t j = 0; j < m; ++j) {
                    CMatrix comm = irrep.generator(i) * irrep.generator(j) - irrep.generator(j) * irrep.generator(i);
                    Vector coeff(m);
                    for (std::size_t k = 0; k < m; ++k) coeff[k] = g.structure_constants()(i, j, k);
                    comm -= represent(irrep, coeff);
                    if (max_abs(comm) > tol) c.fail(irrep.label.to_string() + ": bracket relation fails");
                }
            }
            CMatrix cas = assemble_minus_ca(irrep, Matrix::identity(m));
            cas -= to_complex(Matrix::identity(irrep.dim)) * Complex(irrep.casimir, 0.0);
            if (max_abs(cas) > tol) c.fail(irrep.label.to_string() + ": Casimir is not scalar");
        }
        rep.checks.push_back(c.done());
    }

    Rng rng(seed ^ 0x5eedULL);
    Checker rot("g_{AR} = g_A for orthogonal R");
    Checker len("A Aᵀ <= B Bᵀ implies g_A(X,X) >= g_B(X,X)");
    Checker lmono("A Aᵀ <= B Bᵀ implies lambda1(A) <= lambda1(B)");
    Checker dmono("A Aᵀ <= B Bᵀ implies diam(A) >= diam(B) on a fixed net");
    Checker cab("C_AB identity in low irreps");
    Checker simple("sigma_m^2 lambda1(I) <= lambda1 <= sigma_1^2 lambda1(I)");
    Checker urakawa("lambda1 <= lambda1(I) Tr(A Aᵀ)");
    Checker homothety("lambda1(tA) = t^2 lambda1(A)");
    Checker remark("SU(2)/SO(3) explicit eigenvalue bounds");

    std::optional<Net> net;
    if (g.kind() == GroupKind::SU2 || g.kind() == GroupKind::SO3)
        net = build_net(g, options.net_size, options.knn, seed);
    else if (g.kind() == GroupKind::Product)
        dmono.skip("no diameter estimator for products");
    if (g.kind() != GroupKind::SU2 && g.kind() != GroupKind::SO3) remark.skip("only for SU(2) and SO(3)");
    if (g.kind() == GroupKind::Torus && m > 3) dmono.skip("lattice diameter supports m <= 3");
    const std::vector<Irrep> cab_irreps = test_irreps(g);

    for (std::size_t t = 0; t < n_trials; ++t) {
        const MetricSpec a = sample_metric(g, sampler, seed + t);
        const MetricSpec b = loewner_larger(a, rng);
        const std::string at = "A =\n" + matrix_text(a.a());
        const std::string abt = at + "B =\n" + matrix_text(b.a());

        rot.trial();
        {
            const Matrix r = random_orthogonal(m, rng);
            const MetricSpec ar = metric_from_matrix(a.a() * r);
            Matrix diff = ar.gram() - a.gram();
            if (max_abs(diff) > 1e-9 * std::max(1.0, max_abs(a.gram())))
                rot.fail(at + "R =\n" + matrix_text(r));
        }

        len.trial();
        for (int k = 0; k < 8; ++k) {
            Vector x(m);
            for (double& v : x) v = rng.normal();
            const double ga = a.length_squared(x), gb = b.length_squared(x);
            if (ga < gb - 1e-9 * std::max(1.0, ga)) {
                len.fail(abt);
                break;
            }
        }

        const SpectralResult la = lambda1_certified(g, a);
        const SpectralResult lb = lambda1_certified(g, b);
        lmono.trial();
        if (!(la.certified && lb.certified) || la.lambda1 > lb.lambda1 + 1e-9 * std::max(1.0, lb.lambda1))
            lmono.fail(abt + "lambda1(A) = " + fmt(la.lambda1) + ", lambda1(B) = " + fmt(lb.lambda1));

        if (!dmono.skipped()) {
            dmono.trial();
            double da = 0.0, db = 0.0;
            if (net) {
                da = graph_diameter(g, a, *net, kDefaultNetEpsilon, false).value;
                db = graph_diameter(g, b, *net, kDefaultNetEpsilon, false).value;
            } else {
                // grid maxima plus slack are monotone in the Gram matrix
                da = torus_diameter(g, a).upper;
                db = torus_diameter(g, b).upper;
            }
            if (da < db - 1e-9 * std::max(1.0, db))
                dmono.fail(abt + "diam(A) = " + fmt(da) + ", diam(B) = " + fmt(db));
        }

        simple.trial();
        {
            const double s1 = a.sigma_max(), sm = a.sigma_min(), l = la.lambda1;
            if (l < sm * sm * l0 * (1.0 - kRelTol) || l > s1 * s1 * l0 * (1.0 + kRelTol))
                simple.fail(at + "lambda1 = " + fmt(l));
        }
        urakawa.trial();
        if (la.lambda1 > l0 * trace(a.aat()) * (1.0 + kRelTol)) urakawa.fail(at + "lambda1 = " + fmt(la.lambda1));

        homothety.trial();
        {
            const double tscale = 2.5;
            Matrix ta = a.a();
            ta *= tscale;
            const SpectralResult lt = lambda1_certified(g, metric_from_matrix(ta));
            if (std::abs(lt.lambda1 - tscale * tscale * la.lambda1) > kRelTol * lt.lambda1)
                homothety.fail(at + "lambda1(tA) = " + fmt(lt.lambda1) + ", t^2 lambda1(A) = " +
                               fmt(tscale * tscale * la.lambda1));
        }

        if (g.kind() == GroupKind::SU2 || g.kind() == GroupKind::SO3) {
            remark.trial();
            const double s2 = a.sigma_k(2);
            const double lo = g.kind() == GroupKind::SU2 ? 2.0 : 4.0;
            if (!(la.lambda1 > lo * s2 * s2) || la.lambda1 > 8.0 * s2 * s2 * (1.0 + kRelTol))
                remark.fail(at + "lambda1 = " + fmt(la.lambda1));
        }

        cab.trial();
        for (const Irrep& irrep : cab_irreps) {
            const double res = cab_identity_residual(irrep, a.a(), b.a());
            const double scale = std::max(1.0, max_abs(assemble_minus_ca(irrep, (a.a() * b.a()) * (a.a() * b.a()).transpose())));
            if (res > 1e-10 * scale) {
                cab.fail(abt + irrep.label.to_string() + ": residual " + fmt(res));
                break;
            }
        }
    }
    rep.checks.push_back(rot.done());
    rep.checks.push_back(len.done());
    rep.checks.push_back(lmono.done());
    rep.checks.push_back(dmono.done());
    rep.checks.push_back(cab.done());
    rep.checks.push_back(simple.done());
    rep.checks.push_back(urakawa.done());
    rep.checks.push_back(homothety.done());
    rep.checks.push_back(remark.done());
    return rep;
}

} // namespace liespec
