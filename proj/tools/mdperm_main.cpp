#include "CLI11.hpp"
#include "json.hpp"

#include "mdperm/bounds.hpp"
#include "mdperm/generators.hpp"
#include "mdperm/harness.hpp"
#include "mdperm/matrix_io.hpp"
#include "mdperm/permanent.hpp"
#include "mdperm/version.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace mdperm;

namespace {

// anything that should end the process with the usage/parse exit code
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

MultiMatrix load_matrix(const std::string& input, const std::string& example) {
    if (!example.empty()) return example_matrix(example);
    return parse_mdm(slurp(input));
}

std::string log_text(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

std::string value_text(const LogBound& b) {
    if (!b.applicable || std::isinf(b.log_value)) return b.log_value < 0 ? "0" : "";
    if (b.log_value >= 34.5) return "";  // plain value only below ~1e15
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", std::exp(b.log_value));
    return buf;
}

nlohmann::json json_log(double v) {
    if (std::isinf(v)) return v > 0 ? nlohmann::json("inf") : nlohmann::json("-inf");
    return nlohmann::json(v);
}

int run_compute(const std::string& input, const std::string& example, const std::string& method,
                int k, std::uint64_t budget) {
    const MultiMatrix a = load_matrix(input, example);
    PermanentOptions opts;
    opts.term_budget = budget;

    const auto t0 = std::chrono::steady_clock::now();
    ExactValue v;
    if (method == "naive")
        v = permanent_naive(a, opts);
    else if (method == "laplace")
        v = permanent_laplace(a, opts);
    else if (method == "ryser")
        v = permanent_ryser_2d(a, opts);
    else
        v = permanent_decompose(a, k, opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    char line[64];
    std::snprintf(line, sizeof(line), "elapsed: %.4f s", secs);
    std::cout << v.to_string() << "\n" << line << "\n";
    return 0;
}

int run_bounds(const std::string& input, const std::string& example, const std::string& json_path,
               bool minimize, std::uint64_t budget) {
    const MultiMatrix a = load_matrix(input, example);
    PermanentOptions opts;
    opts.term_budget = budget;

    const std::vector<LogBound> rows = all_bounds(a, minimize, opts);
    std::optional<ExactValue> per;
    try {
        per = permanent_laplace(a, opts);
    } catch (const BudgetExceeded&) {
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf), "d=%d n=%d zero_one=%d total_sum=%.6g", a.dim(), a.order(),
                  a.zero_one() ? 1 : 0, a.total_sum());
    std::cout << buf << "\n";
    if (per)
        std::cout << "per = " << per->to_string() << " (log " << log_text(per->log_value())
                  << ")\n";
    else
        std::cout << "per = (budget exceeded)\n";

    std::snprintf(buf, sizeof(buf), "%-17s %15s %14s %-7s %-4s %-9s %s", "bound", "log_value",
                  "value", "proven", "ok", "applies", "note");
    std::cout << buf << "\n";
    for (const LogBound& b : rows) {
        const char* check = "-";
        if (per && b.applicable && b.proven)
            check = per->log_value() <= b.log_value + 1e-9 ? "ok" : "VIOLATION";
        std::snprintf(buf, sizeof(buf), "%-17s %15s %14s %-7s %-4s %-9s %s", bound_kind_name(b.kind),
                      log_text(b.log_value).c_str(), value_text(b).c_str(),
                      b.proven ? "yes" : "no", check, b.applicable ? "yes" : "no", b.note.c_str());
        std::cout << buf << "\n";
    }

    if (!json_path.empty()) {
        nlohmann::json j;
        j["tool"] = kToolName;
        j["version"] = kVersion;
        j["matrix"] = {{"d", a.dim()},
                       {"n", a.order()},
                       {"zero_one", a.zero_one()},
                       {"total_sum", a.total_sum()}};
        if (per) {
            j["per"] = per->to_string();
            j["log_per"] = json_log(per->log_value());
        }
        nlohmann::json jb = nlohmann::json::array();
        for (const LogBound& b : rows) {
            nlohmann::json one;
            one["name"] = bound_kind_name(b.kind);
            one["log_value"] = json_log(b.log_value);
            if (b.applicable && b.log_value < 34.5) one["value"] = std::exp(b.log_value);
            one["proven"] = b.proven;
            one["applicable"] = b.applicable;
            one["note"] = b.note;
            jb.push_back(std::move(one));
        }
        j["bounds"] = std::move(jb);
        std::ofstream out(json_path);
        if (!out) throw UsageError("cannot write '" + json_path + "'");
        out << j.dump(2) << "\n";
    }
    return 0;
}

int run_fuzz_cmd(const GenSpec& base, int count, const std::string& json_path,
                 std::uint64_t budget, bool minimize) {
    FuzzConfig cfg;
    cfg.base = base;
    cfg.count = count;
    cfg.perm.term_budget = budget;
    cfg.minimize_axis_orders = minimize;

    const FuzzResult res = run_fuzz(cfg);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw UsageError("cannot write '" + json_path + "'");
        out << report_json(res);
    }
    std::cout << summary_line(res) << "\n";
    return res.proven_violations > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact permanents of d-dimensional matrices, with every known upper bound"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    // compute
    std::string c_input = "-", c_example, c_method = "naive";
    int c_k = 1;
    std::uint64_t c_budget = PermanentOptions{}.term_budget;
    auto* compute = app.add_subcommand("compute", "exact permanent of a matrix");
    compute->add_option("input", c_input, "mdm file, or - for stdin");
    compute->add_option("--example", c_example, "built-in matrix name (paper)");
    compute->add_option("--method", c_method, "naive | laplace | decompose | ryser")
        ->check(CLI::IsMember({"naive", "laplace", "decompose", "ryser"}));
    compute->add_option("--k", c_k, "plane dimension for --method decompose (default 1)");
    compute->add_option("--budget-terms", c_budget, "work budget before aborting");

    // bounds
    std::string b_input = "-", b_example, b_json;
    bool b_minimize = false;
    std::uint64_t b_budget = PermanentOptions{}.term_budget;
    auto* bounds = app.add_subcommand("bounds", "every upper bound, plus the exact value");
    bounds->add_option("input", b_input, "mdm file, or - for stdin");
    bounds->add_option("--example", b_example, "built-in matrix name (paper)");
    bounds->add_option("--json", b_json, "also write the rows as JSON to this path");
    bounds->add_flag("--minimize-axis-orders", b_minimize,
                     "search all axis orders for the covering bound");
    bounds->add_option("--budget-terms", b_budget, "work budget before aborting");

    // fuzz
    GenSpec f_base;
    std::string f_gen = "uniform", f_json;
    std::vector<long long> f_r;
    std::vector<int> f_blocks;
    int f_count = 100;
    bool f_minimize = false;
    std::uint64_t f_budget = PermanentOptions{}.term_budget;
    auto* fuzz = app.add_subcommand("fuzz",
                                    "random instances: exact value vs every bound; "
                                    "records candidates beating the unproven one");
    fuzz->add_option("--d", f_base.d, "dimension")->required();
    fuzz->add_option("--n", f_base.n, "order")->required();
    fuzz->add_option("--count", f_count, "number of instances");
    fuzz->add_option("--seed", f_base.seed, "base seed; instance seeds derive from it");
    fuzz->add_option("--gen", f_gen, "uniform | fixed-sums | block-diag | one-per-line")
        ->check(CLI::IsMember({"uniform", "fixed-sums", "block-diag", "one-per-line"}));
    fuzz->add_option("--p", f_base.p, "one-probability for --gen uniform");
    fuzz->add_option("--r", f_r, "hyperplane sums for --gen fixed-sums")->delimiter(',');
    fuzz->add_option("--blocks", f_blocks, "block sizes for --gen block-diag")->delimiter(',');
    fuzz->add_flag("--strict", f_base.strict, "reject infeasible sums instead of clamping");
    fuzz->add_option("--json", f_json, "write the full report to this path");
    fuzz->add_flag("--minimize-axis-orders", f_minimize,
                   "search all axis orders for the covering bound");
    fuzz->add_option("--budget-terms", f_budget, "per-instance work budget");

    // example
    std::string e_name = "paper";
    auto* example = app.add_subcommand("example", "print a built-in matrix in mdm format");
    example->add_option("name", e_name, "matrix name (paper)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (compute->parsed()) return run_compute(c_input, c_example, c_method, c_k, c_budget);
        if (bounds->parsed()) return run_bounds(b_input, b_example, b_json, b_minimize, b_budget);
        if (fuzz->parsed()) {
            f_base.kind = gen_kind_from_name(f_gen);
            f_base.r = f_r;
            f_base.blocks = f_blocks;
            return run_fuzz_cmd(f_base, f_count, f_json, f_budget, f_minimize);
        }
        if (example->parsed()) {
            std::cout << write_mdm(example_matrix(e_name));
            return 0;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
