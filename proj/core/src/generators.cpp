#include <string>

#include "dofnet/error.hpp"
#include "dofnet/network.hpp"

namespace dofnet {

namespace {

std::string name(const char* prefix, int i) { return prefix + std::to_string(i); }

void require_positive(int m, const char* generator) {
  if (m < 1) {
    throw ValidationError(std::string(generator) + ": m must be a positive integer, got " +
                          std::to_string(m));
  }
}

// Appends one bottleneck stage. `single` feeds the lone relay r1 that carries
// the "clean" flow into the bottleneck node; `broadcast` feeds r2..r{m+1}.
// Returns {bottleneck node, side relays}; the caller connects them onward.
struct Stage {
  NodeId bottleneck;
  std::vector<NodeId> side;
};

Stage append_stage(std::vector<std::vector<NodeId>>& layers, std::vector<Edge>& edges, int m,
                   const NodeId& single, const NodeId& broadcast, const char* relay,
                   const NodeId& bottleneck, const char* side_prefix) {
  auto& relays = layers.emplace_back();
  for (int j = 1; j <= m + 1; ++j) relays.push_back(name(relay, j));
  edges.push_back({single, name(relay, 1)});
  for (int j = 2; j <= m + 1; ++j) edges.push_back({broadcast, name(relay, j)});

  Stage stage{bottleneck, {}};
  auto& mid = layers.emplace_back();
  mid.push_back(bottleneck);
  for (int j = 1; j <= m + 1; ++j) edges.push_back({name(relay, j), bottleneck});

  const int side_count = m == 1 ? 1 : m - 1;
  for (int k = 1; k <= side_count; ++k) {
    NodeId u = name(side_prefix, k);
    mid.push_back(u);
    stage.side.push_back(u);
    // r2 is the distributor shared by every side relay.
    edges.push_back({name(relay, 2), u});
    if (m > 1) edges.push_back({name(relay, k + 2), u});
  }
  return stage;
}

}  // namespace

Family parse_family(std::string_view s) {
  if (s == "bottleneck") return Family::kBottleneck;
  if (s == "double-bottleneck") return Family::kDoubleBottleneck;
  if (s == "no-bottleneck" || s == "fig4") return Family::kNoBottleneck;
  throw ValidationError("unknown family \"" + std::string(s) +
                        "\" (expected bottleneck, double-bottleneck or no-bottleneck)");
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kBottleneck:
      return "bottleneck";
    case Family::kDoubleBottleneck:
      return "double-bottleneck";
    case Family::kNoBottleneck:
      return "no-bottleneck";
  }
  return "?";
}

LayeredNetwork gen_bottleneck_family(int m) {
  require_positive(m, "gen_bottleneck_family");
  std::vector<std::vector<NodeId>> layers{{"s1", "s2"}};
  std::vector<Edge> edges;
  Stage stage = append_stage(layers, edges, m, "s1", "s2", "v", "w", "u");
  layers.push_back({"d1", "d2"});
  edges.push_back({stage.bottleneck, "d1"});
  for (const auto& u : stage.side) edges.push_back({u, "d2"});
  return LayeredNetwork(std::move(layers), std::move(edges));
}

LayeredNetwork gen_double_bottleneck_family(int m) {
  require_positive(m, "gen_double_bottleneck_family");
  std::vector<std::vector<NodeId>> layers{{"s1", "s2"}};
  std::vector<Edge> edges;

  Stage first = append_stage(layers, edges, m, "s1", "s2", "v", "w", "u");
  layers.push_back({"x1", "x2"});
  edges.push_back({first.bottleneck, "x1"});
  for (const auto& u : first.side) edges.push_back({u, "x2"});

  // Flow roles swap: x2 (flow 2) feeds the single relay, x1 broadcasts.
  Stage second = append_stage(layers, edges, m, "x2", "x1", "y", "z", "t");
  layers.push_back({"d1", "d2"});
  for (const auto& t : second.side) edges.push_back({t, "d1"});
  edges.push_back({second.bottleneck, "d2"});
  return LayeredNetwork(std::move(layers), std::move(edges));
}

LayeredNetwork gen_no_bottleneck_example() {
  std::vector<std::vector<NodeId>> layers{
      {"s1", "s2"},
      {"v1", "v2", "v3", "v4", "v5"},
      {"v6", "v7", "v8"},
      {"d1", "d2"},
  };
  std::vector<Edge> edges{
      {"s1", "v1"}, {"s1", "v2"},
      {"s2", "v3"}, {"s2", "v4"}, {"s2", "v5"},
      {"v1", "v6"}, {"v1", "v7"},
      {"v2", "v6"}, {"v2", "v7"},
      {"v3", "v6"}, {"v3", "v8"},
      {"v4", "v6"}, {"v4", "v7"}, {"v4", "v8"},
      {"v5", "v6"}, {"v5", "v7"}, {"v5", "v8"},
      {"v6", "d1"},
      {"v7", "d1"},
      {"v8", "d2"},
  };
  return LayeredNetwork(std::move(layers), std::move(edges));
}

LayeredNetwork generate(Family family, int m) {
  switch (family) {
    case Family::kBottleneck:
      return gen_bottleneck_family(m);
    case Family::kDoubleBottleneck:
      return gen_double_bottleneck_family(m);
    case Family::kNoBottleneck:
      return gen_no_bottleneck_example();
  }
  throw ValidationError("unknown family");
}

}  // namespace dofnet
