#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dofnet/cuts.hpp"
#include "dofnet/network.hpp"
#include "dofnet/rational.hpp"

namespace dofnet {

struct DofPoint {
  Rational d1;
  Rational d2;

  bool operator==(const DofPoint&) const = default;
  Rational sum() const { return d1 + d2; }
};

// Where a constraint came from.
struct BoxLower {
  Flow flow;
  bool operator==(const BoxLower&) const = default;
};
struct BoxUpper {
  Flow flow;
  bool connected;  // false: no s_i -> d_i path, so D_i <= 0
  bool operator==(const BoxUpper&) const = default;
};
struct FromBottleneck {
  NodeId node;
  Flow destination;
  int m;
  bool operator==(const FromBottleneck&) const = default;
};
struct FromOmniscient {
  NodeId node;
  Flow destination;
  bool operator==(const FromOmniscient&) const = default;
};
struct Extra {  // caller-supplied, e.g. in tests
  std::string label;
  bool operator==(const Extra&) const = default;
};
using Provenance = std::variant<BoxLower, BoxUpper, FromBottleneck, FromOmniscient, Extra>;

/// a1·D1 + a2·D2 <= rhs. Upper constraints have a1, a2 >= 0 (not both zero)
/// and rhs >= 0; lower box bounds are stored as -D_i <= 0.
struct DofConstraint {
  Rational a1;
  Rational a2;
  Rational rhs;
  Provenance provenance;

  static DofConstraint lower(Flow f);
  static DofConstraint upper(Rational a1, Rational a2, Rational rhs, Provenance provenance);

  bool satisfied_by(const DofPoint& p) const { return a1 * p.d1 + a2 * p.d2 <= rhs; }
  bool is_lower_bound() const { return a1 < 0 || a2 < 0; }
  bool operator==(const DofConstraint&) const = default;
};

/// Outer-bound polygon on (D1, D2). Vertices are exact, deduplicated and
/// listed counter-clockwise starting at the origin.
struct DofRegion {
  std::vector<DofConstraint> constraints;
  std::vector<DofPoint> vertices;
  Rational max_sum;
  DofPoint argmax_vertex;

  bool contains(const DofPoint& p) const;
};

/// Builds the polygon cut out by `constraints`. Both lower bounds D_i >= 0
/// are added if missing. Throws ValidationError for malformed constraints or
/// an unbounded polygon.
DofRegion region_from_constraints(std::vector<DofConstraint> constraints);

/// Box bounds (D_i <= 1 when s_i reaches d_i, else D_i <= 0), one
/// m·D_i + D_ī <= m per bottleneck record, one D1 + D2 <= 1 per
/// omniscient record. This is an outer bound only.
DofRegion build_region(const LayeredNetwork& net, const BottleneckReport& report);

Rational max_sum_dof(const DofRegion& region);

struct SetMembership {
  bool member = false;
  std::optional<std::int64_t> k;  // x = 2(1 - 1/k); absent for x = 2
};

/// Membership of x in {2(1 - 1/k) : k = 1, 2, ...} ∪ {2}.
SetMembership in_set_S(const Rational& x);

/// Human-readable constraint, e.g. "3*D1 + D2 <= 3".
std::string describe(const DofConstraint& c);
std::string describe(const Provenance& p);
std::string describe(const DofPoint& p);

/// {"constraints": [{a1, a2, rhs, provenance}], "vertices": [[p, q]...],
/// "max_sum": "p/q", "argmax": [p, q], "set_S": {...}} with rationals as
/// strings.
std::string serialize_region(const DofRegion& region);

}  // namespace dofnet
