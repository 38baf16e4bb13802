#include "dofnet/rational.hpp"

#include <charconv>

#include "dofnet/error.hpp"

namespace dofnet {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ValidationError("invalid rational \"" + std::string(text) + "\"");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ValidationError("invalid rational \"" + std::string(text) + "\": zero denominator");
  return Rational(parse_int(text.substr(0, slash)), den);
}

}  // namespace dofnet
