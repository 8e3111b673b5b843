#pragma once

#include <json.hpp>
#include <string>

#include "ricci/killing.hpp"
#include "ricci/model.hpp"
#include "ricci/sewing.hpp"
#include "ricci/verify.hpp"

namespace ricci {

using Json = nlohmann::ordered_json;

// Schema version stamped on every serialized report and spec.
inline constexpr int kSchemaVersion = 1;

Json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const Json& j);

// Metric spec files: {"kind": "warped_product" | "constant_curvature" |
// "custom_table", ...}. warped_product embeds a full ModelSpec;
// constant_curvature carries {n, kappa}; custom_table lists polynomial
// coefficients per metric component: entries {i, j, terms: [{powers, coeff}]}.
MetricField metric_from_json(const Json& j);
MetricField load_metric(const std::string& path);

// Dimension declared by a metric spec without building the field.
int metric_spec_dim(const Json& j);

// Model spec hidden in a metric spec file, when present.
bool is_warped_product(const Json& j);

Json to_json(const CompsimpReport& rep);
Json to_json(const MinRicResult& res);
Json to_json(const NonPositivePair& pair);
Json to_json(const SewReport& rep);
Json to_json(const TaylorReport& rep);

// Atomic write: temp file in the target directory, then rename.
void write_text_atomic(const std::string& path, const std::string& content);
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

}  // namespace ricci
