#include "ricci/metric_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ricci {

namespace {

Json vec_to_json(const Vec& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Vec vec_from_json(const Json& j) {
    Vec v(static_cast<int>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

}  // namespace

Json to_json(const ModelSpec& spec) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = spec.n;
    j["k"] = spec.k;
    j["d"] = spec.d;
    j["a"] = spec.a;
    j["b"] = spec.b;
    if (spec.theta) {
        j["theta"] = *spec.theta;
    } else {
        j["theta"] = nullptr;
    }
    j["xi"] = spec.xi;
    j["U"] = vec_to_json(spec.U);
    Json grads = Json::array();
    for (const Vec& g : spec.grads) grads.push_back(vec_to_json(g));
    j["grads"] = grads;
    j["base_vals"] = spec.base_vals;
    j["mu"] = spec.mu;
    j["nu"] = spec.nu;
    return j;
}

ModelSpec model_spec_from_json(const Json& j) {
    ModelSpec spec;
    spec.n = j.at("n").get<int>();
    spec.k = j.at("k").get<int>();
    spec.d = j.at("d").get<int>();
    spec.a = j.at("a").get<double>();
    spec.b = j.at("b").get<double>();
    if (j.contains("theta") && !j.at("theta").is_null()) {
        spec.theta = j.at("theta").get<double>();
    }
    spec.xi = j.value("xi", 0.0);
    spec.U = vec_from_json(j.at("U"));
    for (const Json& g : j.at("grads")) spec.grads.push_back(vec_from_json(g));
    spec.base_vals = j.at("base_vals").get<std::vector<double>>();
    spec.mu = j.at("mu").get<double>();
    spec.nu = j.at("nu").get<double>();
    spec.validate();
    return spec;
}

int metric_spec_dim(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "warped_product") return j.at("model").at("n").get<int>();
    return j.at("dim").get<int>();
}

bool is_warped_product(const Json& j) {
    return j.contains("kind") && j.at("kind") == "warped_product";
}

MetricField metric_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "warped_product") {
        return model_metric_field(model_spec_from_json(j.at("model")));
    }
    if (kind == "constant_curvature") {
        return constant_curvature_metric(j.at("dim").get<int>(),
                                         j.at("kappa").get<double>());
    }
    if (kind == "custom_table") {
        const int n = j.at("dim").get<int>();
        struct Term {
            std::vector<int> powers;
            double coeff;
        };
        struct Component {
            int i, jdx;
            std::vector<Term> terms;
        };
        std::vector<Component> comps;
        for (const Json& c : j.at("components")) {
            Component comp;
            comp.i = c.at("i").get<int>();
            comp.jdx = c.at("j").get<int>();
            if (comp.i < 0 || comp.i >= n || comp.jdx < 0 || comp.jdx >= n) {
                throw BadIndex("custom_table component index out of range");
            }
            for (const Json& t : c.at("terms")) {
                Term term;
                term.powers = t.at("powers").get<std::vector<int>>();
                if (static_cast<int>(term.powers.size()) != n) {
                    throw BadInput("custom_table powers length != dim");
                }
                term.coeff = t.at("coeff").get<double>();
                comp.terms.push_back(term);
            }
            comps.push_back(comp);
        }
        MetricField g;
        g.dim = n;
        g.scheme = DerivScheme::FiniteDifference;
        g.eval = [n, comps](const Vec& p) {
            Mat m = Mat::Zero(n, n);
            for (const auto& comp : comps) {
                double val = 0.0;
                for (const auto& t : comp.terms) {
                    double term = t.coeff;
                    for (int a = 0; a < n; ++a) {
                        for (int e = 0; e < t.powers[a]; ++e) term *= p[a];
                    }
                    val += term;
                }
                m(comp.i, comp.jdx) = val;
                m(comp.jdx, comp.i) = val;
            }
            return m;
        };
        return g;
    }
    throw BadInput("unknown metric kind: " + kind);
}

MetricField load_metric(const std::string& path) {
    return metric_from_json(read_json(path));
}

Json to_json(const CompsimpReport& rep) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["propA"] = rep.propA;
    j["propB"] = rep.propB;
    j["propC"] = rep.propC;
    j["propD"] = rep.propD;
    j["mu"] = rep.mu;
    j["nu"] = rep.nu;
    j["neg_partner_counts"] = rep.neg_partner_counts;
    j["ric_lower"] = rep.ric_lower;
    j["tol"] = rep.tol;
    j["all_true"] = rep.all_true();
    return j;
}

Json to_json(const MinRicResult& res) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["min_value"] = res.min_value;
    j["samples"] = res.samples;
    j["argmin_u"] = vec_to_json(res.argmin.u);
    Json basis = Json::array();
    for (const Vec& b : res.argmin.basis) basis.push_back(vec_to_json(b));
    j["argmin_basis"] = basis;
    return j;
}

Json to_json(const NonPositivePair& pair) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["u"] = vec_to_json(pair.u);
    Json e = Json::array();
    for (const Vec& v : pair.e) e.push_back(vec_to_json(v));
    j["e"] = e;
    j["ric_value"] = pair.ric_value;
    j["cross_terms"] = pair.cross_terms;
    j["ii_uu_norm2"] = pair.ii_uu_norm2;
    j["f2_certificate"] = pair.f2_certificate;
    return j;
}

Json to_json(const SewReport& rep) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["delta"] = rep.delta;
    j["c0_sample"] = rep.c0_sample;
    j["c1_sample"] = rep.c1_sample;
    j["c_est"] = rep.c_est;
    j["bound_c0"] = rep.bound_c0;
    j["bound_c1"] = rep.bound_c1;
    j["pass"] = rep.pass;
    return j;
}

Json to_json(const TaylorReport& rep) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["ts"] = rep.ts;
    j["gaps"] = rep.gaps;
    j["normalized_gaps"] = rep.normalized_gaps;
    j["t4_coefficient_est"] = rep.t4_coefficient_est;
    j["curvature_prediction"] = rep.curvature_prediction;
    return j;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    fs::rename(tmp, target);
}

void write_json(const std::string& path, const Json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

}  // namespace ricci
