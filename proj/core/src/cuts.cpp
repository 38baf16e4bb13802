#include "dofnet/cuts.hpp"

#include <algorithm>
#include <json.hpp>

#include "dofnet/error.hpp"

namespace dofnet {

bool is_cut(const LayeredNetwork& net, const CutQuery& q) {
  for (const auto& n : q.to) net.index_of(n);
  NodeSet start;
  for (const auto& b : q.from) {
    if (!q.removed.contains(b)) start.insert(b);
  }
  const NodeSet reach = reachable(net, start, q.removed);
  return std::none_of(q.to.begin(), q.to.end(), [&](const NodeId& c) { return reach.contains(c); });
}

namespace {

NodeSet both_destinations(const LayeredNetwork& net) {
  return {net.destinations().first, net.destinations().second};
}

bool cuts_sources_from(const LayeredNetwork& net, const NodeId& v, Flow i) {
  return is_cut(net, {{v}, {net.sources().first, net.sources().second}, {net.destination(i)}});
}

bool cuts_other_source(const LayeredNetwork& net, const NodeSet& removed, Flow i) {
  return is_cut(net, {removed, {net.source(Other(i))}, both_destinations(net)});
}

// Calls `visit` on every size-k subset of `items` in lexicographic order and
// stops early when it returns true.
template <typename Visit>
bool for_each_combination(const std::vector<NodeId>& items, std::size_t k, Visit&& visit) {
  const std::size_t n = items.size();
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    NodeSet subset;
    for (auto i : idx) subset.insert(items[i]);
    if (visit(subset)) return true;
    // Advance to the next combination.
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) return false;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<OmniscientRecord> detect_omniscient(const LayeredNetwork& net) {
  std::vector<OmniscientRecord> out;
  for (const auto& v : net.ordered_nodes()) {
    for (Flow i : {Flow::kOne, Flow::kTwo}) {
      if (!cuts_sources_from(net, v, i)) continue;
      std::vector<NodeId> candidates;
      for (const auto& p : parents(net, v)) candidates.push_back(p);
      candidates.push_back(v);
      for (const auto& u : candidates) {
        if (cuts_other_source(net, {u}, i)) {
          out.push_back({v, i, u});
          break;
        }
      }
    }
  }
  return out;
}

std::vector<BottleneckRecord> detect_bottlenecks(const LayeredNetwork& net,
                                                 int max_indegree_for_exhaustive) {
  std::vector<BottleneckRecord> out;
  for (const auto& v : net.ordered_nodes()) {
    for (Flow i : {Flow::kOne, Flow::kTwo}) {
      if (!cuts_sources_from(net, v, i)) continue;
      const NodeSet ps = parents(net, v);
      if (static_cast<int>(ps.size()) > max_indegree_for_exhaustive) {
        throw BudgetExceeded("node \"" + v + "\" has " + std::to_string(ps.size()) +
                             " parents; exhaustive bottleneck search is limited to " +
                             std::to_string(max_indegree_for_exhaustive));
      }
      const std::vector<NodeId> items(ps.begin(), ps.end());
      for (std::size_t k = 1; k <= items.size(); ++k) {
        const bool found = for_each_combination(items, k, [&](const NodeSet& subset) {
          if (!cuts_other_source(net, subset, i)) return false;
          out.push_back({v, i, static_cast<int>(k), subset});
          return true;
        });
        if (found) break;
      }
    }
  }
  return out;
}

BottleneckReport analyze(const LayeredNetwork& net, int max_indegree_for_exhaustive) {
  return {detect_bottlenecks(net, max_indegree_for_exhaustive), detect_omniscient(net)};
}

std::string serialize_report(const BottleneckReport& report) {
  nlohmann::ordered_json doc;
  auto bottlenecks = nlohmann::ordered_json::array();
  for (const auto& b : report.bottlenecks) {
    nlohmann::ordered_json r;
    r["node"] = b.node;
    r["destination"] = Index(b.destination);
    r["minimal_m"] = b.minimal_m;
    r["witness"] = std::vector<NodeId>(b.witness.begin(), b.witness.end());
    bottlenecks.push_back(std::move(r));
  }
  auto omniscient = nlohmann::ordered_json::array();
  for (const auto& o : report.omniscient) {
    nlohmann::ordered_json r;
    r["node"] = o.node;
    r["destination"] = Index(o.destination);
    r["witness_u"] = o.witness_u;
    omniscient.push_back(std::move(r));
  }
  doc["bottlenecks"] = std::move(bottlenecks);
  doc["omniscient"] = std::move(omniscient);
  return doc.dump(2) + "\n";
}

}  // namespace dofnet
