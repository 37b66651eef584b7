#pragma once

#include "mdperm/bounds.hpp"
#include "mdperm/generators.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mdperm {

struct FuzzConfig {
    GenSpec base;          // instance i reuses this spec with a seed derived from base.seed
    int count = 100;
    PermanentOptions perm;
    bool minimize_axis_orders = false;
    double tolerance = 1e-9;  // log-space slack before a bound counts as violated
};

struct InstanceRecord {
    int index = 0;
    std::string spec;  // replayable generator line
    bool skipped = false;
    std::string skip_reason;
    std::string per;          // exact integer digits (generators emit 0/1 matrices)
    double log_per = 0.0;
    double min_hyperplane_ratio = 0.0;  // min over axes/indices of r_i / n^(d-2)
    std::vector<LogBound> bounds;
    std::vector<std::string> violated;  // proven bounds beaten by the exact value
    bool proven_violation = false;
    bool conjecture_candidate = false;
    double conjecture_ratio = 0.0;  // per / tightest conjecture bound
};

struct FuzzResult {
    FuzzConfig config;
    int total = 0;
    int skipped = 0;
    int proven_violations = 0;
    int conjecture_candidates = 0;
    double max_conjecture_ratio = 0.0;
    std::vector<InstanceRecord> instances;
};

/// Generate `count` instances, compute the exact permanent of each, and
/// evaluate every bound. Violations of proven bounds set the failure flag
/// (an implementation bug by definition); instances beating the unproven
/// candidate bound are only recorded for replay. Instances whose exact
/// computation exceeds the budget are skipped with a reason. Processing
/// may run in parallel; records are ordered by instance index.
FuzzResult run_fuzz(const FuzzConfig& cfg);

std::string report_json(const FuzzResult& result);
std::string summary_line(const FuzzResult& result);

}  // namespace mdperm
