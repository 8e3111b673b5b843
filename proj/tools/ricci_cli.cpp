#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "ricci/metric_io.hpp"

using namespace ricci;

namespace {

uint64_t default_seed() {
    if (const char* env = std::getenv("RICCILAB_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

Vec parse_point(const std::string& s, int dim) {
    if (s.empty()) return Vec::Zero(dim);
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (static_cast<int>(vals.size()) != dim) {
        throw BadInput("point has " + std::to_string(vals.size()) +
                       " coordinates, metric needs " + std::to_string(dim));
    }
    Vec p(dim);
    for (size_t i = 0; i < vals.size(); ++i) p[static_cast<int>(i)] = vals[i];
    return p;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stoi(tok));
    return vals;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void emit(const Json& j, const std::string& out_path, const std::string& format) {
    if (!out_path.empty()) {
        write_json(out_path, j);
    }
    if (format == "json" || out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    }
}

// Orthonormal frame used by verify when the metric is not a model spec:
// the orthonormalized coordinate basis at p.
Frame coordinate_frame(const MetricField& g, const Vec& p) {
    std::vector<Vec> raw;
    for (int i = 0; i < g.dim; ++i) {
        Vec e = Vec::Zero(g.dim);
        e[i] = 1.0;
        raw.push_back(e);
    }
    return orthonormalize(g.value(p), p, raw);
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int run_model_build(int n, int k, double a, std::optional<double> theta,
                    std::optional<double> b, const std::string& out,
                    const std::string& format) {
    const ModelSpec spec = build_model(n, k, a, theta, b);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "warped_product";
    j["model"] = to_json(spec);
    emit(j, out, format);
    if (format == "text") {
        std::cout << "model n=" << n << " k=" << k << " d=" << spec.d
                  << " a=" << fmt6(spec.a) << " b=" << fmt6(spec.b)
                  << " mu=" << fmt6(spec.mu) << " nu=" << fmt6(spec.nu) << "\n";
    }
    return 0;
}

int run_verify(const std::string& metric_path, const std::string& point,
               int k, int budget, uint64_t seed, const std::string& out,
               const std::string& csv, const std::string& format) {
    const Json mj = read_json(metric_path);
    const MetricField g = metric_from_json(mj);
    const Vec p = parse_point(point, g.dim);
    Frame K;
    int k_eff = k;
    if (is_warped_product(mj)) {
        const ModelSpec spec = model_spec_from_json(mj.at("model"));
        K = model_killing_frame(spec);
        if (k_eff <= 0) k_eff = spec.k;
    } else {
        K = coordinate_frame(g, p);
    }
    if (k_eff <= 0) throw BadInput("--k is required for non-model metrics");
    const CompsimpReport rep = check_compsimp(g, p, K, k_eff);
    std::vector<double> samples;
    const MinRicResult res =
        min_ric_k(g, p, K, k_eff, budget, seed, csv.empty() ? nullptr : &samples);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["budget"] = budget;
    j["k"] = k_eff;
    j["compsimp"] = to_json(rep);
    j["min_ric_k"] = to_json(res);
    emit(j, out, format);
    if (!csv.empty()) {
        std::ostringstream rows;
        rows << "sample,value\n";
        for (size_t i = 0; i < samples.size(); ++i) {
            rows << i << "," << fmt6(samples[i]) << "\n";
        }
        write_text_atomic(csv, rows.str());
    }
    if (format == "text") {
        std::cout << "compsimp all_true=" << (rep.all_true() ? "yes" : "no")
                  << " mu=" << fmt6(rep.mu) << " nu=" << fmt6(rep.nu)
                  << " ric_lower=" << fmt6(rep.ric_lower)
                  << " min_ric_k=" << fmt6(res.min_value) << "\n";
    }
    return (rep.all_true() && res.min_value > 0.0) ? 0 : 1;
}

int run_bound(const std::string& metric_path, const std::string& slice_arg,
              int k, const std::string& point, const std::string& out,
              const std::string& format) {
    const Json mj = read_json(metric_path);
    const MetricField g = metric_from_json(mj);
    const Vec p = parse_point(point, g.dim);
    Slice slice;
    slice.base = p;
    if (slice_arg == "y-block") {
        if (!is_warped_product(mj)) {
            throw BadInput("--slice y-block needs a warped_product metric");
        }
        const ModelSpec spec = model_spec_from_json(mj.at("model"));
        for (int c = spec.n - spec.d; c < spec.n; ++c) slice.coords.push_back(c);
    } else {
        slice.coords = parse_ints(slice_arg);
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    int code = 0;
    try {
        const NonPositivePair pair = find_nonpositive_pair(g, slice, k);
        j["verdict"] = "NonPositivePair";
        j["pair"] = to_json(pair);
        if (pair.ric_value > 1e-8 || !pair.f2_certificate) code = 1;
        if (format == "text") {
            std::cout << "non-positive pair: ric_value=" << fmt6(pair.ric_value)
                      << " |II(u,u)|^2=" << fmt6(pair.ii_uu_norm2) << "\n";
        }
    } catch (const HypothesisNotViolated& e) {
        j["verdict"] = "HypothesisNotViolated";
        j["message"] = e.what();
        if (format == "text") std::cout << "hypothesis not violated\n";
    }
    emit(j, out, format);
    return code;
}

int run_sew(const std::string& metric_path, const std::string& model_path,
            const std::string& point, double delta, int sweep,
            const std::string& out, const std::string& format) {
    const MetricField g = load_metric(metric_path);
    const Json mj = read_json(model_path);
    if (!is_warped_product(mj)) {
        throw BadInput("sew run expects a warped_product model spec");
    }
    const ModelSpec spec = model_spec_from_json(mj.at("model"));
    const Vec p = parse_point(point, g.dim);
    const MetricField gstar = pullback_model(g, p, spec);
    Json reports = Json::array();
    int code = 0;
    double d = delta;
    for (int i = 0; i < sweep; ++i, d *= 0.5) {
        const SewReport rep = sew_report(g, gstar, p, d);
        reports.push_back(to_json(rep));
        if (!rep.pass) code = 1;
        if (format == "text") {
            std::cout << "delta=" << fmt6(rep.delta) << " c0=" << fmt6(rep.c0_sample)
                      << " c1=" << fmt6(rep.c1_sample)
                      << " bound_c1=" << fmt6(rep.bound_c1)
                      << (rep.pass ? " pass" : " FAIL") << "\n";
        }
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["reports"] = reports;
    emit(j, out, format);
    return code;
}

int run_taylor(const std::string& metric_path, const std::string& model_path,
               const std::string& point, const std::string& ray_arg,
               const std::string& plane_arg, double t0, int levels,
               const std::string& out, const std::string& csv,
               const std::string& format) {
    const MetricField g = load_metric(metric_path);
    const MetricField model = load_metric(model_path);
    const Vec p = parse_point(point, g.dim);
    Vec ray = Vec::Zero(g.dim);
    if (ray_arg.empty()) {
        ray[0] = 1.0;
    } else {
        ray = parse_point(ray_arg, g.dim);
    }
    std::pair<int, int> plane{0, 1};
    if (!plane_arg.empty()) {
        const std::vector<int> ids = parse_ints(plane_arg);
        if (ids.size() != 2) throw BadInput("--plane expects two indices");
        plane = {ids[0], ids[1]};
    }
    const TaylorReport rep =
        jacobi_taylor_check(g, p, model, ray, plane, plane, t0, levels);
    emit(to_json(rep), out, format);
    if (!csv.empty()) {
        std::ostringstream rows;
        rows << "t,gap\n";
        for (size_t i = 0; i < rep.ts.size(); ++i) {
            rows << fmt6(rep.ts[i]) << "," << fmt6(rep.gaps[i]) << "\n";
        }
        write_text_atomic(csv, rows.str());
    }
    if (format == "text") {
        std::cout << "t4 coefficient=" << fmt6(rep.t4_coefficient_est)
                  << " prediction=" << fmt6(rep.curvature_prediction) << "\n";
    }
    return 0;
}

int run_curvature_dump(const std::string& metric_path, const std::string& point,
                       const std::string& out) {
    const MetricField g = load_metric(metric_path);
    const Vec p = parse_point(point, g.dim);
    const CurvatureData cd = riemann(g, p);
    std::ostringstream rows;
    for (int c = 0; c < g.dim; ++c) rows << "x" << c << ",";
    rows << "i,j,k,l,R\n";
    for (int i = 0; i < g.dim; ++i) {
        for (int j = 0; j < g.dim; ++j) {
            for (int k = 0; k < g.dim; ++k) {
                for (int l = 0; l < g.dim; ++l) {
                    for (int c = 0; c < g.dim; ++c) rows << fmt6(p[c]) << ",";
                    rows << i << "," << j << "," << k << "," << l << ","
                         << fmt6(cd.riem(i, j, k, l)) << "\n";
                }
            }
        }
    }
    if (out.empty()) {
        std::cout << rows.str();
    } else {
        write_text_atomic(out, rows.str());
    }
    return 0;
}

int run_full_repro(int nmax, uint64_t seed, const std::string& out,
                   const std::string& format) {
    Json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["seed"] = seed;
    manifest["timestamp"] = iso_timestamp();
    manifest["versions"] = {{"eigen", EIGEN_WORLD_VERSION * 10000 +
                                          EIGEN_MAJOR_VERSION * 100 +
                                          EIGEN_MINOR_VERSION}};
    Json grid = Json::array();
    bool all_ok = true;
    for (int n = 3; n <= nmax; ++n) {
        for (int k = 1; k <= n - 2; ++k) {
            Json entry;
            entry["n"] = n;
            entry["k"] = k;
            try {
                const ModelSpec spec = build_model(n, k);
                const MetricField g = model_metric_field(spec);
                const Frame K = model_killing_frame(spec);
                const Vec origin = Vec::Zero(n);
                const PointCurvature pc = PointCurvature::at(g, origin);
                double worst_sec = 0.0;
                for (int i = 0; i < spec.d; ++i) {
                    for (int j = i + 1; j < spec.d; ++j) {
                        worst_sec = std::max(
                            worst_sec,
                            std::abs(pc.sectional(K.vectors[i], K.vectors[j]) -
                                     closed_form_sec(spec, i, j)));
                    }
                }
                const CompsimpReport rep = check_compsimp(g, origin, K, k);
                const MinRicResult res = min_ric_k(pc, K, k, 2000, seed);
                const bool ok = worst_sec < 1e-9 && rep.all_true() &&
                                res.min_value > 0.0;
                entry["sec_residual"] = worst_sec;
                entry["compsimp_all_true"] = rep.all_true();
                entry["min_ric_k"] = res.min_value;
                entry["verdict"] = ok ? "pass" : "fail";
                all_ok = all_ok && ok;
            } catch (const Error& e) {
                entry["verdict"] = "fail";
                entry["error"] = e.what();
                all_ok = false;
            }
            grid.push_back(entry);
            if (format == "text") {
                std::cout << "(" << n << "," << k
                          << ") " << grid.back()["verdict"].get<std::string>()
                          << "\n";
            }
        }
    }
    manifest["grid"] = grid;

    // Sewing sweep: unit-sphere chart against the (4,2) model, two deltas.
    Json sweep = Json::array();
    try {
        const MetricField g = constant_curvature_metric(4, 1.0);
        const ModelSpec spec = build_model(4, 2);
        const Vec p = Vec::Zero(4);
        const MetricField gstar = pullback_model(g, p, spec);
        SewParams params;
        params.n_dirs = 6;
        params.n_radii = 4;
        for (double d : {0.1, 0.05}) {
            const SewReport rep = sew_report(g, gstar, p, d, params);
            sweep.push_back(to_json(rep));
            all_ok = all_ok && rep.pass;
            if (format == "text") {
                std::cout << "sew delta=" << fmt6(d)
                          << (rep.pass ? " pass" : " FAIL") << "\n";
            }
        }
    } catch (const Error& e) {
        Json entry;
        entry["error"] = e.what();
        sweep.push_back(entry);
        all_ok = false;
    }
    manifest["sewing_sweep"] = sweep;
    manifest["all_pass"] = all_ok;
    emit(manifest, out, format);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"riccilab: model metrics, intermediate Ricci verification, sewing"};
    app.require_subcommand(1);
    uint64_t seed = default_seed();
    std::string format = "json";
    app.add_option("--format", format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));

    // model build
    auto* model_cmd = app.add_subcommand("model", "model metric construction");
    model_cmd->require_subcommand(1);
    auto* build_cmd = model_cmd->add_subcommand("build", "build a model spec");
    int mb_n = 0, mb_k = 0;
    double mb_a = 1.0;
    double mb_theta = -1.0, mb_b = -1.0;
    std::string mb_out;
    build_cmd->add_option("--n", mb_n, "ambient dimension")->required();
    build_cmd->add_option("--k", mb_k, "intermediate index")->required();
    build_cmd->add_option("--a", mb_a, "phi value a");
    build_cmd->add_option("--theta", mb_theta, "rotation angle");
    build_cmd->add_option("--b", mb_b, "phi value b (k = n-2 case)");
    build_cmd->add_option("-o,--out", mb_out, "output spec path");

    // verify ric-k
    auto* verify_cmd = app.add_subcommand("verify", "curvature verification");
    verify_cmd->require_subcommand(1);
    auto* rick_cmd = verify_cmd->add_subcommand("ric-k", "compsimp + min_ric_k");
    std::string vr_metric, vr_point, vr_out, vr_csv;
    int vr_k = 0, vr_budget = 10000;
    rick_cmd->add_option("--metric", vr_metric, "metric spec path")->required();
    rick_cmd->add_option("--point", vr_point, "comma-separated coordinates");
    rick_cmd->add_option("--k", vr_k, "intermediate index");
    rick_cmd->add_option("--budget", vr_budget, "sample budget");
    rick_cmd->add_option("--seed", seed, "random seed");
    rick_cmd->add_option("-o,--out", vr_out, "output report path");
    rick_cmd->add_option("--csv", vr_csv, "CSV dump of sampled values");

    // bound check
    auto* bound_cmd = app.add_subcommand("bound", "symmetry rank bound");
    bound_cmd->require_subcommand(1);
    auto* check_cmd = bound_cmd->add_subcommand("check", "find non-positive pair");
    std::string bc_metric, bc_slice = "y-block", bc_point, bc_out;
    int bc_k = 1;
    check_cmd->add_option("--metric", bc_metric, "metric spec path")->required();
    check_cmd->add_option("--slice", bc_slice, "y-block or coordinate list");
    check_cmd->add_option("--k", bc_k, "intermediate index")->required();
    check_cmd->add_option("--point", bc_point, "base point");
    check_cmd->add_option("-o,--out", bc_out, "output path");

    // sew run / sew taylor
    auto* sew_cmd = app.add_subcommand("sew", "metric sewing");
    sew_cmd->require_subcommand(1);
    auto* run_cmd = sew_cmd->add_subcommand("run", "blend and check bounds");
    std::string sr_metric, sr_model, sr_point, sr_out;
    double sr_delta = 0.1;
    int sr_sweep = 1;
    run_cmd->add_option("--metric", sr_metric, "base metric spec")->required();
    run_cmd->add_option("--model", sr_model, "model spec")->required();
    run_cmd->add_option("--point", sr_point, "sewing center");
    run_cmd->add_option("--delta", sr_delta, "blend radius");
    run_cmd->add_option("--sweep", sr_sweep, "number of halvings");
    run_cmd->add_option("-o,--out", sr_out, "output path");

    auto* taylor_cmd = sew_cmd->add_subcommand("taylor", "radial Taylor check");
    std::string st_metric, st_model, st_point, st_ray, st_plane, st_out, st_csv;
    double st_t0 = 0.1;
    int st_levels = 4;
    taylor_cmd->add_option("--metric", st_metric, "base metric spec")->required();
    taylor_cmd->add_option("--model", st_model, "comparison metric spec")->required();
    taylor_cmd->add_option("--point", st_point, "center");
    taylor_cmd->add_option("--ray", st_ray, "radial direction");
    taylor_cmd->add_option("--plane", st_plane, "rotational plane indices");
    taylor_cmd->add_option("--t0", st_t0, "largest radius");
    taylor_cmd->add_option("--levels", st_levels, "Richardson levels");
    taylor_cmd->add_option("-o,--out", st_out, "output path");
    taylor_cmd->add_option("--csv", st_csv, "CSV of (t, gap) pairs");

    // curvature dump
    auto* curv_cmd = app.add_subcommand("curvature", "curvature tensors");
    curv_cmd->require_subcommand(1);
    auto* dump_cmd = curv_cmd->add_subcommand("dump", "CSV Riemann dump");
    std::string cd_metric, cd_point, cd_out;
    dump_cmd->add_option("--metric", cd_metric, "metric spec path")->required();
    dump_cmd->add_option("--point", cd_point, "evaluation point");
    dump_cmd->add_option("-o,--out", cd_out, "output CSV path");

    // full-repro
    auto* repro_cmd = app.add_subcommand("full-repro", "run the whole grid");
    int fr_nmax = 8;
    std::string fr_out;
    repro_cmd->add_option("--nmax", fr_nmax, "largest ambient dimension");
    repro_cmd->add_option("--seed", seed, "random seed");
    repro_cmd->add_option("-o,--out", fr_out, "manifest path");

    try {
        app.parse(argc, argv);
        if (build_cmd->parsed()) {
            return run_model_build(mb_n, mb_k, mb_a,
                                   mb_theta >= 0 ? std::optional<double>(mb_theta)
                                                 : std::nullopt,
                                   mb_b >= 0 ? std::optional<double>(mb_b)
                                             : std::nullopt,
                                   mb_out, format);
        }
        if (rick_cmd->parsed()) {
            return run_verify(vr_metric, vr_point, vr_k, vr_budget, seed, vr_out,
                              vr_csv, format);
        }
        if (check_cmd->parsed()) {
            return run_bound(bc_metric, bc_slice, bc_k, bc_point, bc_out, format);
        }
        if (run_cmd->parsed()) {
            return run_sew(sr_metric, sr_model, sr_point, sr_delta, sr_sweep,
                           sr_out, format);
        }
        if (taylor_cmd->parsed()) {
            return run_taylor(st_metric, st_model, st_point, st_ray, st_plane,
                              st_t0, st_levels, st_out, st_csv, format);
        }
        if (dump_cmd->parsed()) {
            return run_curvature_dump(cd_metric, cd_point, cd_out);
        }
        if (repro_cmd->parsed()) {
            return run_full_repro(fr_nmax, seed, fr_out, format);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BadDimension& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BadIndex& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
