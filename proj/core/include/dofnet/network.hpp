#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dofnet {

using NodeId = std::string;
using NodeSet = std::set<NodeId>;

struct Edge {
  NodeId from;
  NodeId to;

  auto operator<=>(const Edge&) const = default;
};

/// Index of a unicast session: 1 for (s1, d1), 2 for (s2, d2).
enum class Flow : int { kOne = 1, kTwo = 2 };

constexpr Flow Other(Flow f) { return f == Flow::kOne ? Flow::kTwo : Flow::kOne; }
constexpr int Index(Flow f) { return static_cast<int>(f); }

/// A layered two-unicast network. Nodes are partitioned into layers
/// V_1..V_r with V_1 = {s1, s2} and V_r = {d1, d2}; every edge joins
/// consecutive layers. Instances are immutable and validated on construction.
class LayeredNetwork {
 public:
  /// Throws ValidationError if any invariant fails. When `sources` or
  /// `destinations` is omitted the first and last layers are used in order.
  LayeredNetwork(std::vector<std::vector<NodeId>> layers, std::vector<Edge> edges,
                 std::optional<std::pair<NodeId, NodeId>> sources = std::nullopt,
                 std::optional<std::pair<NodeId, NodeId>> destinations = std::nullopt);

  const std::vector<std::vector<NodeId>>& layers() const { return layers_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::pair<NodeId, NodeId>& sources() const { return sources_; }
  const std::pair<NodeId, NodeId>& destinations() const { return destinations_; }
  const NodeId& source(Flow f) const { return f == Flow::kOne ? sources_.first : sources_.second; }
  const NodeId& destination(Flow f) const {
    return f == Flow::kOne ? destinations_.first : destinations_.second;
  }

  std::size_t layer_count() const { return layers_.size(); }
  std::size_t node_count() const { return names_.size(); }
  bool contains(std::string_view node) const;

  /// Zero-based layer of `node`. Throws ValidationError for unknown nodes.
  int layer_of(std::string_view node) const;

  /// Dense index in [0, node_count()). Throws ValidationError for unknown nodes.
  int index_of(std::string_view node) const;
  const NodeId& name_of(int index) const { return names_[static_cast<std::size_t>(index)]; }

  bool has_edge(std::string_view from, std::string_view to) const;
  /// Position of (from, to) in edges(), if present.
  std::optional<std::size_t> edge_index(std::string_view from, std::string_view to) const;

  const std::vector<int>& parent_indices(int node) const {
    return parents_[static_cast<std::size_t>(node)];
  }
  const std::vector<int>& child_indices(int node) const {
    return children_[static_cast<std::size_t>(node)];
  }

  /// All nodes ordered by (layer, name). Used wherever output must be
  /// deterministic.
  std::vector<NodeId> ordered_nodes() const;

  /// Structural equality: same layer sets, edge set, sources and destinations.
  friend bool operator==(const LayeredNetwork& a, const LayeredNetwork& b);

 private:
  std::vector<std::vector<NodeId>> layers_;
  std::vector<Edge> edges_;
  std::pair<NodeId, NodeId> sources_;
  std::pair<NodeId, NodeId> destinations_;

  std::vector<NodeId> names_;
  std::vector<int> layer_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

/// I(v): the parents of `node`. Throws ValidationError for unknown nodes.
NodeSet parents(const LayeredNetwork& net, std::string_view node);

/// Forward-reachable set from `from` once `removed` (and incident edges) are
/// deleted. Removed nodes are never returned, even if they appear in `from`.
NodeSet reachable(const LayeredNetwork& net, const NodeSet& from, const NodeSet& removed);

/// True if some directed path leads from `from` to `to`.
bool has_path(const LayeredNetwork& net, std::string_view from, std::string_view to);

// JSON I/O. Schema: {"layers": [[...]], "edges": [[u, v], ...],
// "sources": [s1, s2], "destinations": [d1, d2]}; the last two are optional
// on input and always written on output.
LayeredNetwork parse_network(std::string_view text);
std::string serialize_network(const LayeredNetwork& net);

// Generators. Node names are deterministic so outputs are byte-stable.

enum class Family { kBottleneck, kDoubleBottleneck, kNoBottleneck };

/// Accepts "bottleneck", "double-bottleneck", "no-bottleneck" and the alias
/// "fig4" for the last. Throws ValidationError otherwise.
Family parse_family(std::string_view name);
std::string_view family_name(Family f);

/// Four layers: s1 -> v1 -> w -> d1 carries flow 1; s2 feeds the b-relays
/// v2..v{m+1}, all of which also feed w. Side relays u1..u{m-1} (u_k hears
/// v2 and v{k+2}) carry flow 2 to d2. w is an m-bottleneck node for d1.
/// For m = 1 a single side relay u1 hears v2 alone.
LayeredNetwork gen_bottleneck_family(int m);

/// gen_bottleneck_family(m) followed by a flow-swapped copy, glued through
/// x1 (collects flow 1 from w) and x2 (collects flow 2 from the side relays).
/// The second half has relays y1..y{m+1}, bottleneck z for d2 and side
/// relays t1..t{m-1} carrying flow 1 to d1.
LayeredNetwork gen_double_bottleneck_family(int m);

/// The fixed 12-node network with no bottleneck and no omniscient node on
/// which (1, 1) is achievable.
LayeredNetwork gen_no_bottleneck_example();

/// Dispatches to the generators above; `m` is ignored for kNoBottleneck.
LayeredNetwork generate(Family family, int m);

}  // namespace dofnet
