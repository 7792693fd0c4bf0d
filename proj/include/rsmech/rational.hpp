#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace boost {
// Mixing rational<int64_t> with plain int recurses without end in some Boost
// releases; comparisons must use a rational operand.
#define RSMECH_NO_INT_COMPARE(op)                                   \
  bool operator op(const rational<std::int64_t>&, int) = delete;   \
  bool operator op(int, const rational<std::int64_t>&) = delete;
RSMECH_NO_INT_COMPARE(==)
RSMECH_NO_INT_COMPARE(!=)
RSMECH_NO_INT_COMPARE(<)
RSMECH_NO_INT_COMPARE(>)
RSMECH_NO_INT_COMPARE(<=)
RSMECH_NO_INT_COMPARE(>=)
#undef RSMECH_NO_INT_COMPARE
}  // namespace boost

namespace rsmech {

/// Exact arithmetic for costs, types and payments.
using Rational = boost::rational<std::int64_t>;

/// Parses "p/q", "-p/q" or a plain integer. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text form: "n" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace rsmech
