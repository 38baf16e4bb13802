#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace dofnet {

using Rational = boost::rational<std::int64_t>;

// Compare against Rational(k), not a bare integer: with Boost 1.74 under
// C++20, rational == int resolves to a rewritten candidate that recurses.

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Accepts "p/q" or "p". Throws ValidationError on anything else.
Rational parse_rational(std::string_view text);

}  // namespace dofnet
