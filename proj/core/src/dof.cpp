#include "dofnet/dof.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "dofnet/error.hpp"

namespace dofnet {

DofConstraint DofConstraint::lower(Flow f) {
  return f == Flow::kOne ? DofConstraint{-1, 0, 0, BoxLower{f}}
                         : DofConstraint{0, -1, 0, BoxLower{f}};
}

DofConstraint DofConstraint::upper(Rational a1, Rational a2, Rational rhs, Provenance provenance) {
  if (a1 < 0 || a2 < 0 || (a1 == Rational(0) && a2 == Rational(0))) {
    throw ValidationError("constraint coefficients must be non-negative and not both zero");
  }
  if (rhs < 0) throw ValidationError("constraint right-hand side must be non-negative");
  return {a1, a2, rhs, std::move(provenance)};
}

bool DofRegion::contains(const DofPoint& p) const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const DofConstraint& c) { return c.satisfied_by(p); });
}

namespace {

void validate(const DofConstraint& c) {
  const bool lower1 = c.a1 == Rational(-1) && c.a2 == Rational(0) && c.rhs == Rational(0);
  const bool lower2 = c.a1 == Rational(0) && c.a2 == Rational(-1) && c.rhs == Rational(0);
  if (lower1 || lower2) return;
  if (c.a1 < 0 || c.a2 < 0 || (c.a1 == Rational(0) && c.a2 == Rational(0)) || c.rhs < 0) {
    throw ValidationError("malformed constraint " + describe(c));
  }
}

// Counter-clockwise ordering around an interior point, exact.
bool angle_less(const DofPoint& a, const DofPoint& b) {
  auto half = [](const Rational& dx, const Rational& dy) {
    return (dy < 0 || (dy == Rational(0) && dx < 0)) ? 1 : 0;
  };
  const int ha = half(a.d1, a.d2);
  const int hb = half(b.d1, b.d2);
  if (ha != hb) return ha < hb;
  return a.d1 * b.d2 - a.d2 * b.d1 > 0;
}

}  // namespace

DofRegion region_from_constraints(std::vector<DofConstraint> constraints) {
  for (const auto& c : constraints) validate(c);
  for (Flow f : {Flow::kOne, Flow::kTwo}) {
    const DofConstraint lb = DofConstraint::lower(f);
    const bool present = std::any_of(constraints.begin(), constraints.end(), [&](const auto& c) {
      return c.a1 == lb.a1 && c.a2 == lb.a2 && c.rhs == lb.rhs;
    });
    if (!present) constraints.insert(constraints.begin() + (f == Flow::kOne ? 0 : 1), lb);
  }
  const bool bounds_d1 = std::any_of(constraints.begin(), constraints.end(),
                                     [](const auto& c) { return c.a1 > 0; });
  const bool bounds_d2 = std::any_of(constraints.begin(), constraints.end(),
                                     [](const auto& c) { return c.a2 > 0; });
  if (!bounds_d1 || !bounds_d2) throw ValidationError("DoF region is unbounded");

  auto cmp = [](const DofPoint& a, const DofPoint& b) {
    return a.d1 != b.d1 ? a.d1 < b.d1 : a.d2 < b.d2;
  };
  std::set<DofPoint, decltype(cmp)> points(cmp);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (std::size_t j = i + 1; j < constraints.size(); ++j) {
      const auto& p = constraints[i];
      const auto& q = constraints[j];
      const Rational det = p.a1 * q.a2 - p.a2 * q.a1;
      if (det == Rational(0)) continue;
      const DofPoint x{(p.rhs * q.a2 - p.a2 * q.rhs) / det, (p.a1 * q.rhs - p.rhs * q.a1) / det};
      if (std::all_of(constraints.begin(), constraints.end(),
                      [&](const auto& c) { return c.satisfied_by(x); })) {
        points.insert(x);
      }
    }
  }

  DofRegion region;
  region.constraints = std::move(constraints);
  region.vertices.assign(points.begin(), points.end());

  Rational cx = 0, cy = 0;
  for (const auto& v : region.vertices) {
    cx += v.d1;
    cy += v.d2;
  }
  const auto n = static_cast<std::int64_t>(region.vertices.size());
  cx /= n;
  cy /= n;
  std::sort(region.vertices.begin(), region.vertices.end(), [&](const auto& a, const auto& b) {
    return angle_less({a.d1 - cx, a.d2 - cy}, {b.d1 - cx, b.d2 - cy});
  });
  auto origin = std::find(region.vertices.begin(), region.vertices.end(), DofPoint{0, 0});
  std::rotate(region.vertices.begin(), origin, region.vertices.end());

  region.argmax_vertex = region.vertices.front();
  region.max_sum = region.argmax_vertex.sum();
  for (const auto& v : region.vertices) {
    if (v.sum() > region.max_sum) {
      region.max_sum = v.sum();
      region.argmax_vertex = v;
    }
  }
  return region;
}

DofRegion build_region(const LayeredNetwork& net, const BottleneckReport& report) {
  std::vector<DofConstraint> cs{DofConstraint::lower(Flow::kOne), DofConstraint::lower(Flow::kTwo)};
  for (Flow f : {Flow::kOne, Flow::kTwo}) {
    const bool connected = has_path(net, net.source(f), net.destination(f));
    const Rational bound = connected ? 1 : 0;
    cs.push_back(f == Flow::kOne ? DofConstraint{1, 0, bound, BoxUpper{f, connected}}
                                 : DofConstraint{0, 1, bound, BoxUpper{f, connected}});
  }
  for (const auto& b : report.bottlenecks) {
    const Rational m = b.minimal_m;
    const Rational a1 = b.destination == Flow::kOne ? m : Rational(1);
    const Rational a2 = b.destination == Flow::kOne ? Rational(1) : m;
    cs.push_back(DofConstraint::upper(a1, a2, m, FromBottleneck{b.node, b.destination, b.minimal_m}));
  }
  for (const auto& o : report.omniscient) {
    cs.push_back(DofConstraint::upper(1, 1, 1, FromOmniscient{o.node, o.destination}));
  }
  return region_from_constraints(std::move(cs));
}

Rational max_sum_dof(const DofRegion& region) {
  Rational best = region.vertices.front().sum();
  for (const auto& v : region.vertices) best = std::max(best, v.sum());
  return best;
}

SetMembership in_set_S(const Rational& x) {
  if (x == Rational(2)) return {true, std::nullopt};
  if (x < 0 || x > 2) return {false, std::nullopt};
  const Rational k = Rational(2) / (Rational(2) - x);
  if (k.denominator() != 1) return {false, std::nullopt};
  return {true, k.numerator()};
}

// --- formatting ------------------------------------------------------------

namespace {

std::string term(const Rational& a, const char* var) {
  if (a == Rational(1)) return var;
  return to_string(a) + "*" + var;
}

}  // namespace

std::string describe(const DofConstraint& c) {
  if (c.a1 < 0) return "D1 >= 0";
  if (c.a2 < 0) return "D2 >= 0";
  std::string lhs;
  if (c.a1 != Rational(0)) lhs = term(c.a1, "D1");
  if (c.a2 != Rational(0)) lhs += (lhs.empty() ? "" : " + ") + term(c.a2, "D2");
  return lhs + " <= " + to_string(c.rhs);
}

std::string describe(const Provenance& p) {
  struct {
    std::string operator()(const BoxLower&) const { return "box"; }
    std::string operator()(const BoxUpper& b) const {
      return b.connected ? "box" : "box (no path s" + std::to_string(Index(b.flow)) + " -> d" +
                                       std::to_string(Index(b.flow)) + ")";
    }
    std::string operator()(const FromBottleneck& b) const {
      return "bottleneck " + b.node + " for d" + std::to_string(Index(b.destination)) +
             ", m=" + std::to_string(b.m);
    }
    std::string operator()(const FromOmniscient& o) const {
      return "omniscient " + o.node + " for d" + std::to_string(Index(o.destination));
    }
    std::string operator()(const Extra& e) const { return e.label; }
  } visitor;
  return std::visit(visitor, p);
}

std::string describe(const DofPoint& p) {
  return "(" + to_string(p.d1) + ", " + to_string(p.d2) + ")";
}

std::string serialize_region(const DofRegion& region) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  auto cs = ojson::array();
  for (const auto& c : region.constraints) {
    ojson j;
    j["a1"] = to_string(c.a1);
    j["a2"] = to_string(c.a2);
    j["rhs"] = to_string(c.rhs);
    ojson prov;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, BoxLower>) {
            prov["kind"] = "box-lower";
            prov["flow"] = Index(p.flow);
          } else if constexpr (std::is_same_v<T, BoxUpper>) {
            prov["kind"] = "box-upper";
            prov["flow"] = Index(p.flow);
            prov["connected"] = p.connected;
          } else if constexpr (std::is_same_v<T, FromBottleneck>) {
            prov["kind"] = "bottleneck";
            prov["node"] = p.node;
            prov["destination"] = Index(p.destination);
            prov["m"] = p.m;
          } else if constexpr (std::is_same_v<T, FromOmniscient>) {
            prov["kind"] = "omniscient";
            prov["node"] = p.node;
            prov["destination"] = Index(p.destination);
          } else {
            prov["kind"] = "extra";
            prov["label"] = p.label;
          }
        },
        c.provenance);
    j["provenance"] = std::move(prov);
    cs.push_back(std::move(j));
  }
  doc["constraints"] = std::move(cs);
  auto vs = ojson::array();
  for (const auto& v : region.vertices) vs.push_back({to_string(v.d1), to_string(v.d2)});
  doc["vertices"] = std::move(vs);
  doc["max_sum"] = to_string(region.max_sum);
  doc["argmax"] = {to_string(region.argmax_vertex.d1), to_string(region.argmax_vertex.d2)};
  const SetMembership s = in_set_S(region.max_sum);
  ojson set;
  set["member"] = s.member;
  set["k"] = s.k ? ojson(*s.k) : ojson(nullptr);
  doc["set_S"] = std::move(set);
  return doc.dump(2) + "\n";
}

}  // namespace dofnet
