#include "mdperm/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace mdperm {

namespace {

struct Scanner {
    const std::string& text;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return i >= text.size(); }

    void advance() {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }

    std::string read_line() {
        std::string out;
        while (!eof() && text[i] != '\n') {
            out += text[i];
            advance();
        }
        if (!eof()) advance();
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return out;
    }

    bool next_token(std::string& tok, int& tline, int& tcol) {
        while (!eof() && std::isspace(static_cast<unsigned char>(text[i]))) advance();
        if (eof()) return false;
        tline = line;
        tcol = col;
        tok.clear();
        while (!eof() && !std::isspace(static_cast<unsigned char>(text[i]))) {
            tok += text[i];
            advance();
        }
        return true;
    }
};

// order-4, 3-dimensional worked example; axis 0 selects the 4x4 blocks,
// axis 1 their rows. Every hyperplane of every axis sums to 8.
constexpr int kPaperExample[64] = {
    1, 1, 1, 1,  1, 1, 0, 0,  1, 0, 0, 0,  1, 0, 0, 0,
    0, 0, 1, 1,  1, 1, 1, 1,  0, 0, 1, 0,  0, 0, 1, 0,
    0, 1, 0, 0,  0, 1, 0, 0,  1, 1, 1, 1,  1, 1, 0, 0,
    0, 0, 0, 1,  0, 0, 0, 1,  0, 0, 1, 1,  1, 1, 1, 1,
};

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

MultiMatrix parse_mdm(const std::string& text) {
    Scanner sc{text};

    const std::string l1 = sc.read_line();
    if (l1 != "mdm 1")
        throw ParseError("malformed header: expected 'mdm 1', got '" + l1 + "'", 1, 1);

    const std::string l2 = sc.read_line();
    int d = 0, n = 0, consumed = -1;
    if (std::sscanf(l2.c_str(), "d=%d n=%d%n", &d, &n, &consumed) != 2 || consumed < 0 ||
        l2.find_first_not_of(" \t", static_cast<std::size_t>(consumed)) != std::string::npos)
        throw ParseError("malformed header: expected 'd=<d> n=<n>', got '" + l2 + "'", 2, 1);
    if (d < 1) throw ParseError("dimension must be >= 1", 2, 1);
    if (n < 1) throw ParseError("order must be >= 1", 2, 1);

    std::size_t expect = 1;
    for (int k = 0; k < d; ++k) {
        if (expect > (std::size_t{1} << 40) / static_cast<std::size_t>(n))
            throw ParseError("matrix too large: n^d exceeds the storage limit", 2, 1);
        expect *= static_cast<std::size_t>(n);
    }

    std::vector<double> entries;
    entries.reserve(expect);
    std::string tok;
    int tline = 0, tcol = 0;
    while (sc.next_token(tok, tline, tcol)) {
        if (entries.size() == expect)
            throw ParseError("expected " + std::to_string(expect) + " entries, got at least " +
                                 std::to_string(expect + 1),
                             tline, tcol);
        const char* begin = tok.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + tok.size() || !std::isfinite(v))
            throw ParseError("bad entry '" + tok + "'", tline, tcol);
        if (!(v >= 0.0 && v <= 1.0))
            throw ParseError("entry " + tok + " out of range: entries must lie in [0,1]", tline,
                             tcol);
        entries.push_back(v);
    }
    if (entries.size() != expect)
        throw ParseError("expected " + std::to_string(expect) + " entries, got " +
                             std::to_string(entries.size()),
                         sc.line, sc.col);

    return MultiMatrix::from_entries(d, n, std::move(entries));
}

std::string write_mdm(const MultiMatrix& a) {
    std::string out = "mdm 1\nd=" + std::to_string(a.dim()) + " n=" + std::to_string(a.order()) +
                      "\n";
    const std::size_t n = static_cast<std::size_t>(a.order());
    char buf[32];
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), a[i]);
        out.append(buf, res.ptr);
        out += (i + 1) % n == 0 ? '\n' : ' ';
    }
    return out;
}

MultiMatrix example_matrix(const std::string& name) {
    if (name == "paper") {
        std::vector<double> e(std::begin(kPaperExample), std::end(kPaperExample));
        return MultiMatrix::from_entries(3, 4, std::move(e));
    }
    throw std::invalid_argument("unknown example '" + name + "' (available: paper)");
}

}  // namespace mdperm
