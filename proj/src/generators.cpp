#include "mdperm/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mdperm {

namespace {

long long parse_ll(const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (...) {
        throw std::invalid_argument("bad integer '" + s + "' in generator spec");
    }
    if (pos != s.size())
        throw std::invalid_argument("bad integer '" + s + "' in generator spec");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (...) {
        throw std::invalid_argument("bad seed '" + s + "' in generator spec");
    }
    if (pos != s.size()) throw std::invalid_argument("bad seed '" + s + "' in generator spec");
    return v;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (...) {
        throw std::invalid_argument("bad number '" + s + "' in generator spec");
    }
    if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "' in generator spec");
    return v;
}

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(parse_ll(item));
    return out;
}

std::string double_to_text(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::size_t pow_size(int n, int e) {
    std::size_t v = 1;
    for (int i = 0; i < e; ++i) v *= static_cast<std::size_t>(n);
    return v;
}

MultiMatrix gen_uniform(const GenSpec& spec) {
    if (!(spec.p >= 0.0 && spec.p <= 1.0))
        throw std::invalid_argument("uniform generator needs p in [0,1]");
    SeededRng rng(spec.seed);
    std::vector<double> entries(pow_size(spec.n, spec.d));
    for (double& e : entries) e = rng.uniform01() < spec.p ? 1.0 : 0.0;
    return MultiMatrix::from_entries(spec.d, spec.n, std::move(entries));
}

MultiMatrix gen_fixed_sums(const GenSpec& spec) {
    const int n = spec.n;
    if (static_cast<int>(spec.r.size()) != n)
        throw std::invalid_argument("fixed-sums needs exactly " + std::to_string(n) +
                                    " hyperplane sums, got " + std::to_string(spec.r.size()));
    const std::size_t cells = pow_size(n, spec.d - 1);  // per axis-0 hyperplane
    SeededRng rng(spec.seed);
    std::vector<double> entries(cells * static_cast<std::size_t>(n), 0.0);
    std::vector<std::size_t> pool(cells);
    for (int i = 0; i < n; ++i) {
        long long want = spec.r[static_cast<std::size_t>(i)];
        if (want < 0) throw std::invalid_argument("hyperplane sums must be nonnegative");
        if (want > static_cast<long long>(cells)) {
            if (spec.strict)
                throw std::invalid_argument(
                    "hyperplane sum " + std::to_string(want) + " infeasible: a hyperplane has " +
                    std::to_string(cells) + " cells");
            want = static_cast<long long>(cells);
        }
        std::iota(pool.begin(), pool.end(), static_cast<std::size_t>(0));
        // partial Fisher-Yates: the first `want` slots become a uniform
        // sample of distinct cells
        for (long long j = 0; j < want; ++j) {
            const std::size_t pick =
                static_cast<std::size_t>(j) +
                static_cast<std::size_t>(rng.below(cells - static_cast<std::size_t>(j)));
            std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
            entries[static_cast<std::size_t>(i) * cells + pool[static_cast<std::size_t>(j)]] = 1.0;
        }
    }
    return MultiMatrix::from_entries(spec.d, n, std::move(entries));
}

MultiMatrix gen_block_diagonal(const GenSpec& spec) {
    long long total = 0;
    for (const int b : spec.blocks) {
        if (b < 1) throw std::invalid_argument("block sizes must be >= 1");
        total += b;
    }
    if (total > spec.n)
        throw std::invalid_argument("block sizes sum to " + std::to_string(total) +
                                    ", order is only " + std::to_string(spec.n));
    const int d = spec.d;
    const int n = spec.n;
    std::vector<std::size_t> strides(static_cast<std::size_t>(d));
    std::size_t s = 1;
    for (int axis = d - 1; axis >= 0; --axis) {
        strides[static_cast<std::size_t>(axis)] = s;
        s *= static_cast<std::size_t>(n);
    }
    std::vector<double> entries(s, 0.0);
    int off = 0;
    for (const int b : spec.blocks) {
        std::vector<int> c(static_cast<std::size_t>(d), 0);
        const std::size_t count = pow_size(b, d);
        for (std::size_t cell = 0; cell < count; ++cell) {
            std::size_t flat = 0;
            for (int axis = 0; axis < d; ++axis)
                flat += static_cast<std::size_t>(off + c[static_cast<std::size_t>(axis)]) *
                        strides[static_cast<std::size_t>(axis)];
            entries[flat] = 1.0;
            for (int axis = d - 1; axis >= 0; --axis) {
                if (++c[static_cast<std::size_t>(axis)] < b) break;
                c[static_cast<std::size_t>(axis)] = 0;
            }
        }
        off += b;
    }
    return MultiMatrix::from_entries(d, n, std::move(entries));
}

// One-per-line matrices are graphs of functions f: [n]^(d-1) -> [n] whose
// restriction in each argument slot is a bijection; the backtracker fills
// cells in row-major order, trying the feasible values in seeded random
// order.
struct LineBuilder {
    int n = 0;
    int args = 0;          // d-1 argument slots
    std::size_t cells = 0; // n^args
    std::uint64_t budget = 0;
    std::uint64_t steps = 0;
    std::vector<std::vector<std::uint64_t>> used;  // per slot: value mask per rest-rank
    std::vector<int> value;

    std::size_t rest_rank(const std::vector<int>& coords, int skip) const {
        std::size_t r = 0;
        for (int t = 0; t < args; ++t)
            if (t != skip)
                r = r * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(coords[static_cast<std::size_t>(t)]);
        return r;
    }

    bool extend(std::size_t pos, SeededRng& rng) {
        if (pos == cells) return true;
        if (++steps > budget) return false;

        std::vector<int> coords(static_cast<std::size_t>(args));
        std::size_t rest = pos;
        for (int t = args - 1; t >= 0; --t) {
            coords[static_cast<std::size_t>(t)] = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
        }
        std::vector<std::size_t> ranks(static_cast<std::size_t>(args));
        std::uint64_t mask = 0;
        for (int j = 0; j < args; ++j) {
            ranks[static_cast<std::size_t>(j)] = rest_rank(coords, j);
            mask |= used[static_cast<std::size_t>(j)][ranks[static_cast<std::size_t>(j)]];
        }
        std::vector<int> cand;
        for (int v = 0; v < n; ++v)
            if (!(mask >> v & 1)) cand.push_back(v);
        rng.shuffle(cand);
        for (const int v : cand) {
            for (int j = 0; j < args; ++j)
                used[static_cast<std::size_t>(j)][ranks[static_cast<std::size_t>(j)]] |=
                    std::uint64_t{1} << v;
            value[pos] = v;
            if (extend(pos + 1, rng)) return true;
            for (int j = 0; j < args; ++j)
                used[static_cast<std::size_t>(j)][ranks[static_cast<std::size_t>(j)]] &=
                    ~(std::uint64_t{1} << v);
            if (steps > budget) return false;
        }
        return false;
    }
};

MultiMatrix gen_one_per_line(const GenSpec& spec) {
    const int d = spec.d;
    const int n = spec.n;
    if (n > 64) throw std::invalid_argument("one-per-line generation is limited to n <= 64");
    if (d >= 4 && n > 5)
        throw std::invalid_argument("one-per-line generation is limited to n <= 5 for d >= 4");

    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        SeededRng rng(derive_seed(spec.seed, attempt));
        LineBuilder lb;
        lb.n = n;
        lb.args = d - 1;
        lb.cells = pow_size(n, d - 1);
        lb.budget = 4'000'000;
        lb.value.assign(lb.cells, 0);
        lb.used.assign(static_cast<std::size_t>(lb.args),
                       std::vector<std::uint64_t>(pow_size(n, std::max(d - 2, 0)), 0));
        if (!lb.extend(0, rng)) continue;

        std::vector<double> entries(lb.cells * static_cast<std::size_t>(n), 0.0);
        for (std::size_t pos = 0; pos < lb.cells; ++pos)
            entries[pos * static_cast<std::size_t>(n) + static_cast<std::size_t>(lb.value[pos])] =
                1.0;
        return MultiMatrix::from_entries(d, n, std::move(entries));
    }
    throw std::runtime_error("one-per-line backtracking failed after 64 attempts");
}

}  // namespace

std::uint64_t SeededRng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below(0) is undefined");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;  // multiple of bound
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % bound;
}

double SeededRng::uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ull;  // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

const char* gen_kind_name(GenKind kind) {
    switch (kind) {
        case GenKind::uniform: return "uniform";
        case GenKind::fixed_hyperplane_sums: return "fixed-sums";
        case GenKind::block_diagonal: return "block-diag";
        case GenKind::one_per_line: return "one-per-line";
    }
    return "?";
}

GenKind gen_kind_from_name(const std::string& name) {
    if (name == "uniform") return GenKind::uniform;
    if (name == "fixed-sums") return GenKind::fixed_hyperplane_sums;
    if (name == "block-diag") return GenKind::block_diagonal;
    if (name == "one-per-line") return GenKind::one_per_line;
    throw std::invalid_argument("unknown generator kind '" + name + "'");
}

std::string GenSpec::to_text() const {
    std::string out = gen_kind_name(kind);
    out += " d=" + std::to_string(d) + " n=" + std::to_string(n);
    if (kind == GenKind::uniform) out += " p=" + double_to_text(p);
    if (kind == GenKind::fixed_hyperplane_sums) {
        out += " r=";
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(r[i]);
        }
        if (strict) out += " strict=1";
    }
    if (kind == GenKind::block_diagonal) {
        out += " blocks=";
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(blocks[i]);
        }
    }
    out += " seed=" + std::to_string(seed);
    return out;
}

GenSpec GenSpec::from_text(const std::string& line) {
    std::istringstream in(line);
    std::string tok;
    if (!(in >> tok)) throw std::invalid_argument("empty generator spec");
    GenSpec spec;
    spec.kind = gen_kind_from_name(tok);
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad generator spec token '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "d") {
            spec.d = static_cast<int>(parse_ll(val));
        } else if (key == "n") {
            spec.n = static_cast<int>(parse_ll(val));
        } else if (key == "p") {
            spec.p = parse_double(val);
        } else if (key == "r") {
            spec.r = parse_ll_list(val);
        } else if (key == "blocks") {
            spec.blocks.clear();
            for (const long long b : parse_ll_list(val)) spec.blocks.push_back(static_cast<int>(b));
        } else if (key == "strict") {
            spec.strict = val == "1" || val == "true";
        } else if (key == "seed") {
            spec.seed = parse_u64(val);
        } else {
            throw std::invalid_argument("unknown generator spec key '" + key + "'");
        }
    }
    return spec;
}

MultiMatrix generate(const GenSpec& spec) {
    if (spec.d < 1) throw std::invalid_argument("generator needs d >= 1");
    if (spec.n < 1) throw std::invalid_argument("generator needs n >= 1");
    switch (spec.kind) {
        case GenKind::uniform: return gen_uniform(spec);
        case GenKind::fixed_hyperplane_sums: return gen_fixed_sums(spec);
        case GenKind::block_diagonal: return gen_block_diagonal(spec);
        case GenKind::one_per_line: return gen_one_per_line(spec);
    }
    throw std::invalid_argument("unknown generator kind");
}

OmegaRatioReport omega_ratio_report(int samples, int d, int n, std::uint64_t seed,
                                    const PermanentOptions& opts) {
    if (d < 3) throw std::invalid_argument("ratio report requires d >= 3");
    if (samples < 0) throw std::invalid_argument("sample count must be nonnegative");

    OmegaRatioReport rep;
    rep.d = d;
    rep.n = n;
    rep.base_seed = seed;
    rep.log_reference = static_cast<double>(d - 2) * log_factorial(n) - n;

    for (int s = 0; s < samples; ++s) {
        GenSpec gs;
        gs.kind = GenKind::one_per_line;
        gs.d = d;
        gs.n = n;
        gs.seed = derive_seed(seed, static_cast<std::uint64_t>(s));

        const MultiMatrix a = generate(gs);
        const ExactValue per = permanent_naive(a, opts);
        OmegaRatioRow row;
        row.seed = gs.seed;
        row.spec = gs.to_text();
        row.per = per.to_string();
        row.log_per = per.log_value();
        row.ratio = std::isinf(row.log_per) ? 0.0 : std::exp(row.log_per - rep.log_reference);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace mdperm
