#pragma once

#include "mdperm/multi_matrix.hpp"

#include <stdexcept>
#include <string>

namespace mdperm {

/// Parse failure; message already carries the 1-based line/column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// mdm v1 text format:
///   line 1: `mdm 1`
///   line 2: `d=<d> n=<n>`
///   then n^d whitespace-separated entries (integers or decimal fractions)
///   in row-major order, last axis fastest.
MultiMatrix parse_mdm(const std::string& text);

/// Canonical form: header, then one line of n entries per line of the
/// matrix, entries in shortest round-trip notation. parse_mdm(write_mdm(a))
/// reproduces a bit-exactly.
std::string write_mdm(const MultiMatrix& a);

/// Built-in matrices by name; "paper" is the order-4 3-dimensional worked
/// example used across the golden tests.
MultiMatrix example_matrix(const std::string& name);

}  // namespace mdperm
