#include "mdperm/exact_value.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace mdperm {

ExactValue ExactValue::of_integer(BigInt v) {
    ExactValue e;
    e.is_integer = true;
    e.integer = std::move(v);
    return e;
}

ExactValue ExactValue::of_real(double v, double magnitude_scale) {
    ExactValue e;
    e.is_integer = false;
    if (v < 0.0 && -v < 1e-12 * magnitude_scale) {
        e.real = 0.0;
        e.clamped = true;
    } else {
        e.real = v;
    }
    return e;
}

double ExactValue::log_value() const {
    if (is_integer) {
        if (integer == 0) return -std::numeric_limits<double>::infinity();
        const unsigned bits = boost::multiprecision::msb(integer);
        if (bits < 1000) return std::log(integer.convert_to<double>());
        // keep the top 64 bits and add back the shifted-out scale
        const BigInt top = integer >> (bits - 63);
        return std::log(top.convert_to<double>()) +
               static_cast<double>(bits - 63) * std::log(2.0);
    }
    if (real <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(real);
}

double ExactValue::as_double() const {
    return is_integer ? integer.convert_to<double>() : real;
}

std::string ExactValue::to_string() const {
    if (is_integer) return integer.str();
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), real);
    return std::string(buf, r.ptr);
}

bool ExactValue::operator==(const ExactValue& o) const {
    if (is_integer != o.is_integer) return false;
    return is_integer ? integer == o.integer : real == o.real;
}

}  // namespace mdperm
