#include "dofnet/network.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>

#include "dofnet/error.hpp"

namespace dofnet {

namespace {

std::string quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

}  // namespace

LayeredNetwork::LayeredNetwork(std::vector<std::vector<NodeId>> layers, std::vector<Edge> edges,
                               std::optional<std::pair<NodeId, NodeId>> sources,
                               std::optional<std::pair<NodeId, NodeId>> destinations)
    : layers_(std::move(layers)), edges_(std::move(edges)) {
  if (layers_.size() < 2) {
    throw ValidationError("layering violation: a network needs at least 2 layers, got " +
                          std::to_string(layers_.size()));
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    for (const auto& name : layers_[l]) {
      if (name.empty()) throw ValidationError("empty node name in layer " + std::to_string(l + 1));
      auto [it, inserted] = index_.emplace(name, static_cast<int>(names_.size()));
      if (!inserted) throw ValidationError("duplicate node " + quote(name));
      names_.push_back(name);
      layer_.push_back(static_cast<int>(l));
    }
  }

  const auto& first = layers_.front();
  const auto& last = layers_.back();
  if (first.size() != 2) {
    throw ValidationError("layering violation: first layer must be exactly {s1, s2}, has " +
                          std::to_string(first.size()) + " nodes");
  }
  if (last.size() != 2) {
    throw ValidationError("layering violation: last layer must be exactly {d1, d2}, has " +
                          std::to_string(last.size()) + " nodes");
  }
  sources_ = sources.value_or(std::pair{first[0], first[1]});
  destinations_ = destinations.value_or(std::pair{last[0], last[1]});

  auto check_endpoint = [&](const NodeId& n, const std::vector<NodeId>& layer, const char* role) {
    if (!index_.contains(n)) throw ValidationError(std::string("missing ") + role + " " + quote(n));
    if (std::find(layer.begin(), layer.end(), n) == layer.end()) {
      throw ValidationError(std::string(role) + " " + quote(n) + " is not in the " +
                            (layer == first ? "first" : "last") + " layer");
    }
  };
  check_endpoint(sources_.first, first, "source");
  check_endpoint(sources_.second, first, "source");
  check_endpoint(destinations_.first, last, "destination");
  check_endpoint(destinations_.second, last, "destination");
  if (sources_.first == sources_.second) throw ValidationError("sources must be distinct");
  if (destinations_.first == destinations_.second) {
    throw ValidationError("destinations must be distinct");
  }

  parents_.resize(names_.size());
  children_.resize(names_.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    auto from = index_.find(e.from);
    auto to = index_.find(e.to);
    if (from == index_.end()) throw ValidationError("edge references unknown node " + quote(e.from));
    if (to == index_.end()) throw ValidationError("edge references unknown node " + quote(e.to));
    if (from->second == to->second) throw ValidationError("self-loop on " + quote(e.from));
    if (layer_[to->second] != layer_[from->second] + 1) {
      throw ValidationError("layering violation: edge [" + quote(e.from) + ", " + quote(e.to) +
                            "] joins layer " + std::to_string(layer_[from->second] + 1) +
                            " to layer " + std::to_string(layer_[to->second] + 1));
    }
    if (!seen.emplace(from->second, to->second).second) {
      throw ValidationError("duplicate edge [" + quote(e.from) + ", " + quote(e.to) + "]");
    }
    parents_[to->second].push_back(from->second);
    children_[from->second].push_back(to->second);
  }
  auto by_name = [this](int a, int b) { return names_[a] < names_[b]; };
  for (auto& p : parents_) std::sort(p.begin(), p.end(), by_name);
  for (auto& c : children_) std::sort(c.begin(), c.end(), by_name);
}

bool LayeredNetwork::contains(std::string_view node) const {
  return index_.contains(std::string(node));
}

int LayeredNetwork::index_of(std::string_view node) const {
  auto it = index_.find(std::string(node));
  if (it == index_.end()) throw ValidationError("unknown node " + quote(node));
  return it->second;
}

int LayeredNetwork::layer_of(std::string_view node) const {
  return layer_[static_cast<std::size_t>(index_of(node))];
}

bool LayeredNetwork::has_edge(std::string_view from, std::string_view to) const {
  return edge_index(from, to).has_value();
}

std::optional<std::size_t> LayeredNetwork::edge_index(std::string_view from,
                                                      std::string_view to) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].from == from && edges_[i].to == to) return i;
  }
  return std::nullopt;
}

std::vector<NodeId> LayeredNetwork::ordered_nodes() const {
  std::vector<NodeId> out;
  out.reserve(names_.size());
  for (const auto& layer : layers_) {
    std::vector<NodeId> sorted = layer;
    std::sort(sorted.begin(), sorted.end());
    out.insert(out.end(), sorted.begin(), sorted.end());
  }
  return out;
}

bool operator==(const LayeredNetwork& a, const LayeredNetwork& b) {
  if (a.sources_ != b.sources_ || a.destinations_ != b.destinations_) return false;
  if (a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    if (NodeSet(a.layers_[l].begin(), a.layers_[l].end()) !=
        NodeSet(b.layers_[l].begin(), b.layers_[l].end())) {
      return false;
    }
  }
  return std::set<Edge>(a.edges_.begin(), a.edges_.end()) ==
         std::set<Edge>(b.edges_.begin(), b.edges_.end());
}

NodeSet parents(const LayeredNetwork& net, std::string_view node) {
  NodeSet out;
  for (int p : net.parent_indices(net.index_of(node))) out.insert(net.name_of(p));
  return out;
}

NodeSet reachable(const LayeredNetwork& net, const NodeSet& from, const NodeSet& removed) {
  std::vector<char> blocked(net.node_count(), 0);
  for (const auto& r : removed) blocked[net.index_of(r)] = 1;

  std::vector<char> visited(net.node_count(), 0);
  std::deque<int> queue;
  for (const auto& f : from) {
    int i = net.index_of(f);
    if (!blocked[i] && !visited[i]) {
      visited[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int c : net.child_indices(u)) {
      if (!blocked[c] && !visited[c]) {
        visited[c] = 1;
        queue.push_back(c);
      }
    }
  }
  NodeSet out;
  for (std::size_t i = 0; i < visited.size(); ++i) {
    if (visited[i]) out.insert(net.name_of(static_cast<int>(i)));
  }
  return out;
}

bool has_path(const LayeredNetwork& net, std::string_view from, std::string_view to) {
  return reachable(net, {std::string(from)}, {}).contains(std::string(to));
}

// --- JSON ------------------------------------------------------------------

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw ValidationError("schema violation: " + what);
}

std::pair<NodeId, NodeId> read_pair(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
    schema_error(std::string("\"") + key + "\" must be an array of 2 strings");
  }
  return {v[0].get<std::string>(), v[1].get<std::string>()};
}

}  // namespace

LayeredNetwork parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("top-level value must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "layers" && key != "edges" && key != "sources" && key != "destinations") {
      schema_error("unexpected key \"" + key + "\"");
    }
  }
  if (!doc.contains("layers")) schema_error("missing key \"layers\"");
  if (!doc.contains("edges")) schema_error("missing key \"edges\"");

  const auto& jl = doc["layers"];
  if (!jl.is_array()) schema_error("\"layers\" must be an array");
  std::vector<std::vector<NodeId>> layers;
  for (std::size_t l = 0; l < jl.size(); ++l) {
    if (!jl[l].is_array()) schema_error("layer " + std::to_string(l + 1) + " must be an array");
    auto& layer = layers.emplace_back();
    for (const auto& n : jl[l]) {
      if (!n.is_string()) schema_error("node names must be strings (layer " + std::to_string(l + 1) + ")");
      layer.push_back(n.get<std::string>());
    }
  }

  const auto& je = doc["edges"];
  if (!je.is_array()) schema_error("\"edges\" must be an array");
  std::vector<Edge> edges;
  for (const auto& e : je) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      schema_error("edge " + e.dump() + " must be a 2-element string array");
    }
    edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
  }

  std::optional<std::pair<NodeId, NodeId>> sources, destinations;
  if (doc.contains("sources")) sources = read_pair(doc, "sources");
  if (doc.contains("destinations")) destinations = read_pair(doc, "destinations");
  return LayeredNetwork(std::move(layers), std::move(edges), sources, destinations);
}

std::string serialize_network(const LayeredNetwork& net) {
  nlohmann::ordered_json doc;
  doc["layers"] = net.layers();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : net.edges()) edges.push_back({e.from, e.to});
  doc["edges"] = std::move(edges);
  doc["sources"] = {net.sources().first, net.sources().second};
  doc["destinations"] = {net.destinations().first, net.destinations().second};
  return doc.dump(2) + "\n";
}

}  // namespace dofnet
