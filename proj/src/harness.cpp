#include "mdperm/harness.hpp"

#include "mdperm/parallel.hpp"
#include "mdperm/version.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace mdperm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_hyperplane_ratio(const MultiMatrix& a) {
    const int d = a.dim();
    const int n = a.order();
    double scale = 1.0;
    for (int i = 0; i < d - 2; ++i) scale *= n;
    double best = kInf;
    for (int axis = 0; axis < d; ++axis)
        for (int i = 0; i < n; ++i)
            best = std::min(best, hyperplane_sum(a, axis, i) / scale);
    return best;
}

InstanceRecord evaluate_instance(const FuzzConfig& cfg, int index) {
    InstanceRecord rec;
    rec.index = index;

    GenSpec gs = cfg.base;
    gs.seed = derive_seed(cfg.base.seed, static_cast<std::uint64_t>(index));
    rec.spec = gs.to_text();

    std::optional<MultiMatrix> a;
    try {
        a.emplace(generate(gs));
    } catch (const std::runtime_error& e) {
        // per-instance retry exhaustion; bad parameters throw
        // invalid_argument instead and abort the whole run
        rec.skipped = true;
        rec.skip_reason = std::string("generation failed: ") + e.what();
        return rec;
    }

    ExactValue per;
    try {
        per = permanent_naive(*a, cfg.perm);
    } catch (const BudgetExceeded& e) {
        rec.skipped = true;
        rec.skip_reason = std::string("budget exceeded: ") + e.what();
        return rec;
    }
    rec.per = per.to_string();
    rec.log_per = per.log_value();
    rec.min_hyperplane_ratio = min_hyperplane_ratio(*a);
    rec.bounds = all_bounds(*a, cfg.minimize_axis_orders, cfg.perm);

    double tightest_conjecture = kInf;
    for (const LogBound& b : rec.bounds) {
        if (!b.applicable) continue;
        if (b.proven) {
            if (rec.log_per > b.log_value + cfg.tolerance) {
                rec.proven_violation = true;
                rec.violated.push_back(std::string(bound_kind_name(b.kind)) + " (" + b.note + ")");
            }
        } else {
            tightest_conjecture = std::min(tightest_conjecture, b.log_value);
        }
    }
    if (tightest_conjecture < kInf) {
        rec.conjecture_candidate = rec.log_per > tightest_conjecture + cfg.tolerance;
        if (std::isinf(rec.log_per) && rec.log_per < 0)
            rec.conjecture_ratio = 0.0;
        else if (std::isinf(tightest_conjecture) && tightest_conjecture < 0)
            rec.conjecture_ratio = kInf;
        else
            rec.conjecture_ratio = std::exp(rec.log_per - tightest_conjecture);
    }
    return rec;
}

nlohmann::json json_log(double v) {
    if (std::isinf(v)) return v > 0 ? nlohmann::json("inf") : nlohmann::json("-inf");
    return nlohmann::json(v);
}

}  // namespace

FuzzResult run_fuzz(const FuzzConfig& cfg) {
    FuzzResult result;
    result.config = cfg;
    result.total = cfg.count;
    result.instances.resize(static_cast<std::size_t>(std::max(cfg.count, 0)));

    const auto count = static_cast<std::uint64_t>(std::max(cfg.count, 0));
    chunked_partials<int>(count, resolve_threads(cfg.perm.threads),
                          [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i)
            result.instances[i] = evaluate_instance(cfg, static_cast<int>(i));
        return 0;
    });

    for (const InstanceRecord& rec : result.instances) {
        if (rec.skipped) {
            ++result.skipped;
            continue;
        }
        if (rec.proven_violation) ++result.proven_violations;
        if (rec.conjecture_candidate) ++result.conjecture_candidates;
        result.max_conjecture_ratio = std::max(result.max_conjecture_ratio, rec.conjecture_ratio);
    }
    return result;
}

std::string report_json(const FuzzResult& result) {
    nlohmann::json j;
    j["tool"] = kToolName;
    j["version"] = kVersion;
    j["config"] = {
        {"spec", result.config.base.to_text()},
        {"count", result.config.count},
        {"term_budget", result.config.perm.term_budget},
        {"minimize_axis_orders", result.config.minimize_axis_orders},
        {"tolerance", result.config.tolerance},
    };
    j["totals"] = {
        {"instances", result.total},
        {"skipped", result.skipped},
        {"proven_violations", result.proven_violations},
        {"conjecture_candidates", result.conjecture_candidates},
        {"max_conjecture_ratio", json_log(result.max_conjecture_ratio)},
    };

    nlohmann::json instances = nlohmann::json::array();
    for (const InstanceRecord& rec : result.instances) {
        nlohmann::json ji;
        ji["index"] = rec.index;
        ji["spec"] = rec.spec;
        if (rec.skipped) {
            ji["skipped"] = true;
            ji["skip_reason"] = rec.skip_reason;
            instances.push_back(std::move(ji));
            continue;
        }
        ji["per"] = rec.per;
        ji["log_per"] = json_log(rec.log_per);
        ji["min_hyperplane_ratio"] = rec.min_hyperplane_ratio;
        nlohmann::json jb = nlohmann::json::array();
        for (const LogBound& b : rec.bounds) {
            nlohmann::json one;
            one["name"] = bound_kind_name(b.kind);
            one["log_value"] = json_log(b.log_value);
            if (b.applicable && b.log_value < 34.5)  // plain value only below ~1e15
                one["value"] = std::exp(b.log_value);
            one["proven"] = b.proven;
            one["applicable"] = b.applicable;
            one["note"] = b.note;
            jb.push_back(std::move(one));
        }
        ji["bounds"] = std::move(jb);
        ji["proven_violation"] = rec.proven_violation;
        if (!rec.violated.empty()) ji["violated"] = rec.violated;
        ji["conjecture_candidate"] = rec.conjecture_candidate;
        ji["conjecture_ratio"] = json_log(rec.conjecture_ratio);
        instances.push_back(std::move(ji));
    }
    j["instances"] = std::move(instances);
    return j.dump(2) + "\n";
}

std::string summary_line(const FuzzResult& result) {
    char ratio[32];
    if (std::isinf(result.max_conjecture_ratio))
        std::snprintf(ratio, sizeof(ratio), "inf");
    else
        std::snprintf(ratio, sizeof(ratio), "%.6g", result.max_conjecture_ratio);
    std::string s = std::to_string(result.total) + " instances";
    if (result.skipped) s += " (" + std::to_string(result.skipped) + " skipped)";
    s += ", proven violations: " + std::to_string(result.proven_violations);
    s += ", conjecture candidates: " + std::to_string(result.conjecture_candidates);
    s += ", max per/conjecture ratio: ";
    s += ratio;
    return s;
}

}  // namespace mdperm
