#include "liespec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liespec/egs_scan.hpp"
#include "liespec/geometry.hpp"
#include "liespec/lie_core.hpp"
#include "liespec/metric_space.hpp"
#include "liespec/rep_theory.hpp"

namespace liespec {

namespace {

using nlohmann::json;

struct Options {
    std::string group = "su2";
    std::string matrix;
    std::string rotation;
    std::uint64_t seed = 0;
    std::size_t samples = 100;
    std::size_t net_size = 20000;
    std::size_t knn = 12;
    std::size_t grid = 64;
    double eps_net = kDefaultNetEpsilon;
    std::uint64_t net_seed = 0;
    std::string out;
    std::string format = "table";
    std::string method = "auto";
    double window_cap = 1e6;
    std::size_t jobs = 1;
    double sigma_lo = 0.1;
    double sigma_hi = 10.0;
    bool no_rotation = false;
    std::string kind = "shrink-transverse";
    std::string s_values;
    std::size_t trials = 100;
    std::size_t verify_net_size = 2000;
};

/// 12 significant digits for tables, round-trip precision elsewhere.
std::string num(double x, int digits = 12) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json matrix_json(const Matrix& a) {
    json rows = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(Vector(a.row(i).begin(), a.row(i).end()));
    return rows;
}

/// Existing file path, otherwise inline numbers.
Matrix load_matrix(const std::string& text, std::size_t m) {
    if (text.empty()) return Matrix::identity(m);
    std::error_code ec;
    Matrix a = std::filesystem::is_regular_file(text, ec) ? read_matrix_file(text) : parse_inline_matrix(text);
    if (a.rows() != m)
        throw ValidationError("matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              " but the group has dimension " + std::to_string(m));
    return a;
}

std::vector<double> parse_s_values(const std::string& text) {
    std::vector<double> s;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ValidationError("bad s value '" + item + "'");
        }
        if (used != item.size()) throw ValidationError("bad s value '" + item + "'");
        s.push_back(v);
    }
    if (s.empty()) throw ValidationError("--s-values is empty");
    return s;
}

DiamConfig diam_config(const Options& o) {
    DiamConfig c;
    c.method = parse_diam_method(o.method);
    c.net_size = o.net_size;
    c.knn = o.knn;
    c.grid_resolution = o.grid;
    c.eps_net = o.eps_net;
    c.net_seed = o.net_seed;
    return c;
}

json diam_json(const DiameterEstimate& d) {
    json j;
    j["method"] = std::string(to_string(d.method));
    j["value"] = finite_or_null(d.value);
    j["lower"] = finite_or_null(d.lower);
    j["upper"] = finite_or_null(d.upper);
    j["net_size"] = d.net_size;
    j["knn"] = d.knn;
    j["grid_resolution"] = d.grid_resolution;
    j["heuristic"] = d.heuristic;
    j["notes"] = d.notes;
    return j;
}

void emit_json(std::ostream& out, json j) {
    json doc;
    doc["schema_version"] = 1;
    doc.update(j);
    out << doc.dump(2) << '\n';
}

// --- commands -----------------------------------------------------------------

int cmd_sigma(const Options& o, std::ostream& out) {
    const LieGroup g = LieGroup::from_key(o.group);
    const MetricSpec spec = metric_from_matrix(load_matrix(o.matrix, g.dim()));
    const Matrix& p = spec.sorting_rotation();
    if (o.format == "json") {
        emit_json(out, {{"command", "sigma"}, {"group", g.key()}, {"m", g.dim()}, {"sigma", spec.sigma()},
                        {"sorting_rotation", matrix_json(p)}});
    } else if (o.format == "csv") {
        out << "k,sigma\n";
        for (std::size_t k = 0; k < g.dim(); ++k) out << k + 1 << ',' << num(spec.sigma()[k], 17) << '\n';
    } else {
        out << "m=" << g.dim() << '\n' << "sigma:";
        for (double s : spec.sigma()) out << ' ' << num(s);
        out << "\nsorting rotation P:\n";
        for (std::size_t i = 0; i < p.rows(); ++i) {
            for (std::size_t j = 0; j < p.cols(); ++j) out << (j ? " " : "  ") << num(p(i, j));
            out << '\n';
        }
    }
    return 0;
}

int cmd_lambda1(const Options& o, std::ostream& out, std::ostream& err) {
    const LieGroup g = LieGroup::from_key(o.group);
    const MetricSpec spec = metric_from_matrix(load_matrix(o.matrix, g.dim()));
    if (!(o.window_cap > 0.0)) throw ValidationError("--window-cap must be positive");
    const SpectralResult r = lambda1_certified(g, spec, {o.window_cap});
    if (o.format == "json") {
        emit_json(out, {{"command", "lambda1"}, {"group", g.key()}, {"lambda1", finite_or_null(r.lambda1)},
                        {"witness", r.witness.to_string()}, {"certified", r.certified}, {"window", r.window},
                        {"evaluations", r.evaluations}, {"diagnostics", r.diagnostics}});
    } else if (o.format == "csv") {
        out << "group,lambda1,witness,certified,window,evaluations\n"
            << g.key() << ',' << num(r.lambda1, 17) << ",\"" << r.witness.to_string() << "\","
            << (r.certified ? "true" : "false") << ',' << num(r.window, 17) << ',' << r.evaluations << '\n';
    } else {
        out << "lambda1=" << num(r.lambda1) << " witness=" << r.witness.to_string()
            << " certified=" << (r.certified ? "true" : "false") << '\n';
    }
    if (!r.certified) {
        err << "error: " << r.diagnostics << '\n';
        return 3;
    }
    return 0;
}

int cmd_diam(const Options& o, std::ostream& out) {
    const LieGroup g = LieGroup::from_key(o.group);
    const MetricSpec spec = metric_from_matrix(load_matrix(o.matrix, g.dim()));
    const DiamConfig cfg = diam_config(o);
    const DiameterEstimate d = estimate_diameter(g, spec, cfg);
    if (o.format == "json") {
        json j = diam_json(d);
        j["command"] = "diam";
        j["group"] = g.key();
        emit_json(out, j);
    } else if (o.format == "csv") {
        out << "group,method,value,lower,upper,net_size,knn,grid_resolution\n"
            << g.key() << ',' << to_string(d.method) << ',' << num(d.value, 17) << ',' << num(d.lower, 17) << ','
            << num(d.upper, 17) << ',' << d.net_size << ',' << d.knn << ',' << d.grid_resolution << '\n';
    } else {
        out << "diam=" << num(d.value) << " lower=" << num(d.lower) << " upper=" << num(d.upper)
            << " method=" << to_string(d.method) << '\n';
        if (!d.notes.empty()) out << "notes: " << d.notes << '\n';
    }
    return 0;
}

int cmd_ell(const Options& o, std::ostream& out) {
    const LieGroup g = LieGroup::from_key(o.group);
    const Matrix p = load_matrix(o.rotation, g.dim());
    const std::size_t ell = ell_index(g, p);
    const auto dims = prefix_generated_dims(g, p);
    if (o.format == "json") {
        emit_json(out, {{"command", "ell"}, {"group", g.key()}, {"ell", ell}, {"prefix_generated_dims", dims},
                        {"k_max", g.k_max()}});
    } else if (o.format == "csv") {
        out << "k,generated_dim\n";
        for (std::size_t k = 0; k < dims.size(); ++k) out << k + 1 << ',' << dims[k] << '\n';
    } else {
        out << "ell=" << ell << " k_max=" << g.k_max() << '\n' << "prefix generated dims:";
        for (auto d : dims) out << ' ' << d;
        out << '\n';
    }
    return 0;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
    const LieGroup g = LieGroup::from_key(o.group);
    if (o.samples == 0) throw ValidationError("--samples must be at least 1");
    if (!(o.sigma_lo > 0.0 && o.sigma_lo <= o.sigma_hi)) throw ValidationError("need 0 < --sigma-lo <= --sigma-hi");
    ScanOptions so;
    so.n_samples = o.samples;
    so.sampler = {o.sigma_lo, o.sigma_hi, !o.no_rotation};
    so.diam = diam_config(o);
    so.base_seed = o.seed;
    so.jobs = o.jobs;
    const ScanResult res = scan(g, so);
    if (o.format == "json") {
        write_scan_json(out, res);
    } else if (o.format == "csv") {
        write_scan_csv(out, res.records);
    } else {
        const ScanSummary& s = res.summary;
        out << "samples=" << s.samples << " max_ratio=" << num(s.max_ratio) << " at seed "
            << res.records[s.argmax].seed << " sigma=";
        for (std::size_t k = 0; k < s.argmax_sigma.size(); ++k) out << (k ? "," : "") << num(s.argmax_sigma[k], 6);
        out << "\nviolations: li_ok=" << s.li_violations << " simple_bounds_ok=" << s.simple_bounds_violations
            << " remark_diam_ok=" << s.remark_diam_violations << " remark_lambda_ok=" << s.remark_lambda_violations
            << " urakawa_ok=" << s.urakawa_violations << " uncertified=" << s.uncertified << '\n';
    }
    for (const auto& v : res.summary.violations) {
        err << "violation at sample " << v.index << ":";
        for (const auto& f : v.failed) err << ' ' << f;
        err << "\n  reproduce: " << v.reproduce << '\n';
    }
    return res.summary.uncertified ? 3 : 0;
}

int cmd_degenerate(const Options& o, std::ostream& out) {
    const LieGroup g = LieGroup::from_key(o.group);
    const DegenerationKind kind = parse_degeneration_kind(o.kind);
    const std::vector<double> s = o.s_values.empty() ? default_s_values(kind) : parse_s_values(o.s_values);
    const DegenerationReport rep = degeneration_experiment(g, kind, s, diam_config(o));
    if (o.format == "json") {
        json rows = json::array();
        for (const auto& r : rep.rows) {
            json row{{"s", r.s}, {"sigma", r.sigma}, {"lambda1", finite_or_null(r.lambda1)},
                     {"lambda1_certified", r.lambda1_certified}, {"tracked", finite_or_null(r.tracked)}};
            row["diam"] = r.diam ? diam_json(*r.diam) : json(nullptr);
            rows.push_back(std::move(row));
        }
        emit_json(out, {{"command", "degenerate"},
                        {"group", rep.group},
                        {"kind", std::string(to_string(rep.kind))},
                        {"frame", matrix_json(rep.p)},
                        {"tracked_name", rep.tracked_name},
                        {"rows", rows},
                        {"lambda1_strictly_decreasing", rep.lambda1_strictly_decreasing},
                        {"lambda1_strictly_increasing", rep.lambda1_strictly_increasing},
                        {"diam_strictly_increasing", rep.diam_strictly_increasing},
                        {"tracked_strictly_decreasing", rep.tracked_strictly_decreasing}});
        return 0;
    }
    const bool csv = o.format == "csv";
    const char* sep = csv ? "," : "  ";
    out << "s" << sep << "sigma" << sep << "lambda1" << sep << "certified" << sep << "diam" << sep
        << rep.tracked_name << '\n';
    for (const auto& r : rep.rows) {
        out << num(r.s, csv ? 17 : 6) << sep;
        for (std::size_t k = 0; k < r.sigma.size(); ++k) out << (k ? ";" : "") << num(r.sigma[k], csv ? 17 : 6);
        out << sep << num(r.lambda1, csv ? 17 : 10) << sep << (r.lambda1_certified ? "true" : "false") << sep
            << (r.diam ? num(r.diam->value, csv ? 17 : 8) : std::string(csv ? "" : "-")) << sep
            << num(r.tracked, csv ? 17 : 10) << '\n';
    }
    if (!csv) {
        out << "lambda1 strictly decreasing: " << (rep.lambda1_strictly_decreasing ? "yes" : "no")
            << ", strictly increasing: " << (rep.lambda1_strictly_increasing ? "yes" : "no") << '\n';
        if (!rep.rows.empty() && rep.rows.front().diam)
            out << "diam strictly increasing: " << (rep.diam_strictly_increasing ? "yes" : "no") << '\n';
        out << rep.tracked_name << " strictly decreasing: " << (rep.tracked_strictly_decreasing ? "yes" : "no")
            << '\n';
    }
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const LieGroup g = LieGroup::from_key(o.group);
    if (o.trials == 0) throw ValidationError("--trials must be at least 1");
    PropertyOptions po;
    po.net_size = o.verify_net_size;
    po.knn = o.knn;
    const PropertyReport rep = property_suite(g, o.trials, o.seed, po);
    if (o.format == "json") {
        json checks = json::array();
        for (const auto& c : rep.checks)
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"skipped", c.skipped}, {"trials", c.trials},
                              {"detail", c.detail}});
        emit_json(out, {{"command", "verify"}, {"group", rep.group}, {"all_passed", rep.all_passed()},
                        {"checks", checks}});
    } else if (o.format == "csv") {
        out << "name,passed,skipped,trials\n";
        for (const auto& c : rep.checks)
            out << '"' << c.name << "\"," << (c.passed ? "true" : "false") << ',' << (c.skipped ? "true" : "false")
                << ',' << c.trials << '\n';
    } else {
        for (const auto& c : rep.checks) {
            out << (c.skipped ? "SKIP" : c.passed ? "PASS" : "FAIL") << "  " << c.name << " (" << c.trials
                << " trials)\n";
            if (!c.passed || c.skipped) out << "      " << c.detail << '\n';
        }
        out << (rep.all_passed() ? "all checks passed" : "some checks FAILED") << '\n';
    }
    return rep.all_passed() ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra and diameters of left-invariant metrics on compact Lie groups", "liespec"};
    app.set_config("--config", "", "TOML config file; unknown keys are rejected");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--format", o.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--out", o.out, "write output to this file instead of stdout");
    app.add_option("--seed", o.seed, "base seed for all randomness");
    app.add_option("--jobs", o.jobs, "worker threads for scan")->check(CLI::Range(1, 256));

    auto add_group = [&](CLI::App* sc) { sc->add_option("--group", o.group, "t1..t4, su2, so3, su2xsu2"); };
    auto add_matrix = [&](CLI::App* sc) {
        sc->add_option("--matrix", o.matrix, "file path or inline row-major floats (default identity)");
    };
    auto add_net = [&](CLI::App* sc) {
        sc->add_option("--method", o.method, "auto, graph, lattice, biinv, bounds");
        sc->add_option("--net-size", o.net_size, "net nodes")->check(CLI::Range(100, 10000000));
        sc->add_option("--knn", o.knn, "net neighbours")->check(CLI::Range(6, 1000));
        sc->add_option("--net-seed", o.net_seed, "seed of the net rotation");
        sc->add_option("--grid", o.grid, "torus grid resolution per axis")->check(CLI::Range(2, 4096));
        sc->add_option("--eps-net", o.eps_net, "relative net error used for the lower bound");
    };

    CLI::App* sigma = app.add_subcommand("sigma", "singular values and sorting rotation of A");
    add_group(sigma);
    add_matrix(sigma);
    CLI::App* lambda1 = app.add_subcommand("lambda1", "certified first eigenvalue");
    add_group(lambda1);
    add_matrix(lambda1);
    lambda1->add_option("--window-cap", o.window_cap, "largest Casimir value to examine");
    CLI::App* diam = app.add_subcommand("diam", "diameter estimate");
    add_group(diam);
    add_matrix(diam);
    add_net(diam);
    CLI::App* ell = app.add_subcommand("ell", "bracket-generating index of a rotation");
    add_group(ell);
    ell->add_option("--rotation", o.rotation, "orthogonal P (file or inline, default identity)");
    CLI::App* scan_cmd = app.add_subcommand("scan", "lambda1 * diam^2 over random metrics");
    add_group(scan_cmd);
    add_net(scan_cmd);
    scan_cmd->add_option("--samples", o.samples, "number of samples");
    scan_cmd->add_option("--sigma-lo", o.sigma_lo, "smallest singular value");
    scan_cmd->add_option("--sigma-hi", o.sigma_hi, "largest singular value");
    scan_cmd->add_flag("--no-rotation", o.no_rotation, "keep A diagonal");
    CLI::App* degenerate = app.add_subcommand("degenerate", "degeneration sweep");
    add_group(degenerate);
    add_net(degenerate);
    degenerate->add_option("--kind", o.kind, "shrink-transverse, enlarge-triple, dense-line");
    degenerate->add_option("--s-values", o.s_values, "comma separated s values");
    CLI::App* verify = app.add_subcommand("verify", "randomized invariant checks");
    add_group(verify);
    verify->add_option("--trials", o.trials, "trials per check");
    verify->add_option("--net-size", o.verify_net_size, "net size for the diameter monotonicity check")
        ->check(CLI::Range(100, 10000000));
    verify->add_option("--knn", o.knn, "net neighbours")->check(CLI::Range(6, 1000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        check_k_max_catalog();
        std::ofstream file;
        if (!o.out.empty()) {
            file.open(o.out);
            if (!file) throw ValidationError("cannot open output file '" + o.out + "'");
        }
        std::ostream& dest = o.out.empty() ? out : file;
        if (*sigma) return cmd_sigma(o, dest);
        if (*lambda1) return cmd_lambda1(o, dest, err);
        if (*diam) return cmd_diam(o, dest);
        if (*ell) return cmd_ell(o, dest);
        if (*scan_cmd) return cmd_scan(o, dest, err);
        if (*degenerate) return cmd_degenerate(o, dest);
        if (*verify) return cmd_verify(o, dest);
        return 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ComputationError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace liespec
