#include <string>

#include "dofnet/error.hpp"
#include "dofnet/scheme.hpp"

namespace dofnet {

namespace {

std::string name(const char* prefix, int i) { return prefix + std::to_string(i); }

TransmitSpec send(Flow f, int index) { return {SendSymbol{{f, index}, {}}}; }
TransmitSpec replay(int slot) { return {ReplayReceived{slot, {}}}; }

// The linear form node `at` received in `slot` when each listed edge carried
// the given symbol: sum_j h_{from_j, at}[slot] · symbol_j.
TransmitSpec reconstruct(const std::vector<std::pair<NodeId, SymbolId>>& senders, const NodeId& at,
                         int slot) {
  SendReconstruction r;
  for (const auto& [from, sym] : senders) {
    r.target.push_back({Coefficient{1.0, {GainRef{{from, at}, slot}}}, sym});
  }
  return {std::move(r)};
}

Scheme empty_scheme(std::string family, int m, int hops, int slots, int k1, int k2) {
  Scheme s;
  s.family = std::move(family);
  s.m = m;
  s.k1 = k1;
  s.k2 = k2;
  s.hops.assign(static_cast<std::size_t>(hops), HopBlock{slots, {}});
  return s;
}

// Names and flow roles of one bottleneck stage (three hops). The "clean"
// flow travels single -> r1 -> bottleneck; the other flow is broadcast to
// r2..r{m+1} and reaches its sink through the side relays.
struct StageLayout {
  int first_hop;
  NodeId single;
  NodeId broadcast;
  Flow clean;
  int clean_symbols;  // m - 1 for the single-bottleneck network, m otherwise
  const char* relay;
  NodeId bottleneck;
  const char* side;
};

void schedule_stage(Scheme& sch, int m, const StageLayout& st) {
  const Flow spread = Other(st.clean);
  const int h0 = st.first_hop;
  // The last clean symbol of an (m+1)-slot block rides in the extra slot.
  auto source_slot = [&](int l) { return l <= m - 1 ? l : m + 1; };
  auto relay_slot = [&](int l) { return l <= m - 1 ? l + 1 : m + 1; };

  // Inputs: broadcast one spread symbol per slot, feed the clean relay.
  for (int l = 1; l <= m; ++l) sch.set(h0, l, st.broadcast, send(spread, l));
  for (int l = 1; l <= st.clean_symbols; ++l) sch.set(h0, source_slot(l), st.single, send(st.clean, l));

  // Relays: slot 1 loads the bottleneck with L1; in slot 2 the distributor
  // r2 resends L1 so the bottleneck can strip it from the first clean symbol.
  std::vector<std::pair<NodeId, SymbolId>> first_slot;
  for (int j = 2; j <= m + 1; ++j) {
    sch.set(h0 + 1, 1, name(st.relay, j), send(spread, j - 1));
    first_slot.push_back({name(st.relay, j), {spread, j - 1}});
  }
  if (m >= 2) sch.set(h0 + 1, 2, name(st.relay, 2), reconstruct(first_slot, st.bottleneck, 1));
  for (int l = 1; l <= st.clean_symbols; ++l) {
    sch.set(h0 + 1, relay_slot(l), name(st.relay, 1), send(st.clean, l));
  }

  // Outputs: the bottleneck forwards decoded clean symbols; side relays hand
  // over L1 and their pair combinations one per slot.
  for (int l = 1; l <= st.clean_symbols; ++l) sch.set(h0 + 2, l, st.bottleneck, send(st.clean, l));
  if (m == 1) {
    sch.set(h0 + 2, 1, name(st.side, 1), replay(1));
  } else {
    sch.set(h0 + 2, 1, name(st.side, 1), replay(2));
    for (int k = 1; k <= m - 1; ++k) sch.set(h0 + 2, k + 1, name(st.side, k), replay(1));
  }
}

Scheme bottleneck_scheme(int m) {
  Scheme s = empty_scheme("bottleneck", m, 3, m, m - 1, m);
  schedule_stage(s, m, {0, "s1", "s2", Flow::kOne, m - 1, "v", "w", "u"});
  return s;
}

Scheme double_bottleneck_scheme(int m) {
  Scheme s = empty_scheme("double-bottleneck", m, 6, m + 1, m, m);
  schedule_stage(s, m, {0, "s1", "s2", Flow::kOne, m, "v", "w", "u"});
  schedule_stage(s, m, {3, "x2", "x1", Flow::kTwo, m, "y", "z", "t"});
  return s;
}

Scheme no_bottleneck_scheme() {
  const Flow a = Flow::kOne;
  const Flow b = Flow::kTwo;
  Scheme s = empty_scheme("no-bottleneck", 1, 3, 3, 3, 3);
  for (int l = 1; l <= 3; ++l) {
    s.set(0, l, "s1", send(a, l));
    s.set(0, l, "s2", send(b, l));
  }

  // Slot 1: b's go out; v6 hears L1(b1,b2,b3), v7 hears L2(b2,b3), v8 L3.
  s.set(1, 1, "v3", send(b, 1));
  s.set(1, 1, "v4", send(b, 2));
  s.set(1, 1, "v5", send(b, 3));
  // Slot 2: v3 resends L1 for v6 to cancel while v1, v2 send a1, a2.
  s.set(1, 2, "v3", reconstruct({{"v3", {b, 1}}, {"v4", {b, 2}}, {"v5", {b, 3}}}, "v6", 1));
  s.set(1, 2, "v1", send(a, 1));
  s.set(1, 2, "v2", send(a, 2));
  // Slot 3: v4 resends L2 so v7 can isolate a3.
  s.set(1, 3, "v1", send(a, 3));
  s.set(1, 3, "v4", reconstruct({{"v4", {b, 2}}, {"v5", {b, 3}}}, "v7", 1));

  // v6 -> d1: L5(a1, a2); v7 -> d1: L6(a1, a2), a3; v8 -> d2: L3, L1, L2.
  s.set(2, 1, "v6", reconstruct({{"v1", {a, 1}}, {"v2", {a, 2}}}, "v6", 2));
  s.set(2, 2, "v7", replay(2));
  s.set(2, 3, "v7", send(a, 3));
  for (int l = 1; l <= 3; ++l) s.set(2, l, "v8", replay(l));
  return s;
}

}  // namespace

Scheme builtin_scheme(Family family, int m) {
  if (m < 1) throw ValidationError("builtin scheme: m must be a positive integer, got " + std::to_string(m));
  switch (family) {
    case Family::kBottleneck:
      return bottleneck_scheme(m);
    case Family::kDoubleBottleneck:
      return double_bottleneck_scheme(m);
    case Family::kNoBottleneck:
      if (m != 1) throw ValidationError("builtin scheme no-bottleneck takes no parameter (m must be 1)");
      return no_bottleneck_scheme();
  }
  throw ValidationError("unknown scheme family");
}

}  // namespace dofnet
