#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace mdperm {

using BigInt = boost::multiprecision::cpp_int;

/// Result of an exact permanent computation.
///
/// Zero-one matrices get an arbitrary-precision integer; real-entry
/// matrices get a double carried with a relative-error budget of about
/// 1e-9 per arithmetic layer. Tiny negative real results (inclusion-
/// exclusion round-off) are clamped to 0 and flagged.
struct ExactValue {
    bool is_integer = true;
    BigInt integer = 0;
    double real = 0.0;
    bool clamped = false;

    static ExactValue of_integer(BigInt v);
    static ExactValue of_real(double v, double magnitude_scale);

    /// Natural log of the value; -infinity for 0.
    double log_value() const;

    /// Value as a double (saturates for integers beyond double range).
    double as_double() const;

    /// Decimal representation: exact digits for integers, shortest
    /// round-trip form for reals.
    std::string to_string() const;

    bool operator==(const ExactValue& o) const;
};

}  // namespace mdperm
