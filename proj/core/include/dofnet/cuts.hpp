#pragma once

#include <string>
#include <vector>

#include "dofnet/network.hpp"

namespace dofnet {

/// "Is `removed` a (`from`, `to`)-cut?" Nodes of `from` or `to` that are
/// also in `removed` count as removed.
struct CutQuery {
  NodeSet removed;
  NodeSet from;
  NodeSet to;
};

/// True iff deleting `q.removed` disconnects every path from `q.from` to `q.to`.
/// Throws ValidationError if the query names an unknown node.
bool is_cut(const LayeredNetwork& net, const CutQuery& q);

struct BottleneckRecord {
  NodeId node;
  Flow destination;  // v cuts {s1, s2} from this destination
  int minimal_m;
  NodeSet witness;  // subset of I(node) cutting the other source from {d1, d2}

  bool operator==(const BottleneckRecord&) const = default;
};

struct OmniscientRecord {
  NodeId node;
  Flow destination;
  NodeId witness_u;  // member of I(node) ∪ {node} cutting the other source

  bool operator==(const OmniscientRecord&) const = default;
};

struct BottleneckReport {
  std::vector<BottleneckRecord> bottlenecks;
  std::vector<OmniscientRecord> omniscient;

  bool operator==(const BottleneckReport&) const = default;
};

inline constexpr int kDefaultIndegreeBudget = 16;

/// Omniscient nodes, ordered by (layer, name, destination). The first
/// qualifying u in (parents by name, then v itself) is reported.
std::vector<OmniscientRecord> detect_omniscient(const LayeredNetwork& net);

/// For every node v that cuts both sources from d_i, the smallest M ⊆ I(v)
/// cutting s_ī from both destinations; ties at equal size go to the
/// lexicographically smallest M. Throws BudgetExceeded when such a v has more
/// than `max_indegree_for_exhaustive` parents.
std::vector<BottleneckRecord> detect_bottlenecks(
    const LayeredNetwork& net, int max_indegree_for_exhaustive = kDefaultIndegreeBudget);

/// Both detectors in one report.
BottleneckReport analyze(const LayeredNetwork& net,
                         int max_indegree_for_exhaustive = kDefaultIndegreeBudget);

/// Stable JSON: {"bottlenecks": [{node, destination, minimal_m, witness}],
/// "omniscient": [{node, destination, witness_u}]}.
std::string serialize_report(const BottleneckReport& report);

}  // namespace dofnet
