#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dofnet/dof.hpp"
#include "dofnet/network.hpp"

namespace dofnet {

/// a_index for flow 1, b_index for flow 2; index is 1-based.
struct SymbolId {
  Flow flow;
  int index;

  auto operator<=>(const SymbolId&) const = default;
};

std::string to_string(const SymbolId& s);
SymbolId parse_symbol(std::string_view text);

/// h_{edge}[slot], where slot counts within the hop block of the edge.
struct GainRef {
  Edge edge;
  int slot;

  auto operator<=>(const GainRef&) const = default;
};

/// value × product of the referenced gains.
struct Coefficient {
  double value = 1.0;
  std::vector<GainRef> gains;

  bool operator==(const Coefficient&) const = default;
};

struct Silent {
  bool operator==(const Silent&) const = default;
};

/// Sources send their own symbols; relays must be able to decode the symbol
/// from their received history.
struct SendSymbol {
  SymbolId symbol;
  Coefficient scale;
  bool operator==(const SendSymbol&) const = default;
};

/// Amplify-and-forward of the signal received in `slot` of the previous hop.
struct ReplayReceived {
  int slot;
  Coefficient scale;
  bool operator==(const ReplayReceived&) const = default;
};

struct FormTerm {
  Coefficient coefficient;
  SymbolId symbol;
  bool operator==(const FormTerm&) const = default;
};

/// Transmit the linear form sum(coefficient · symbol). The node's history
/// must determine it; coefficients may only use gains the node knows.
struct SendReconstruction {
  std::vector<FormTerm> target;
  Coefficient scale;
  bool operator==(const SendReconstruction&) const = default;
};

struct ComboTerm;
struct LinearCombo {
  std::vector<ComboTerm> terms;
  bool operator==(const LinearCombo&) const;
};

struct TransmitSpec {
  std::variant<Silent, SendSymbol, ReplayReceived, SendReconstruction, LinearCombo> kind;

  bool operator==(const TransmitSpec&) const = default;
};

struct ComboTerm {
  double weight;
  TransmitSpec spec;
  bool operator==(const ComboTerm&) const = default;
};

inline bool LinearCombo::operator==(const LinearCombo& o) const { return terms == o.terms; }

/// One hop block: nodes of layer h transmit to layer h+1 over `slots` slots.
/// Unscheduled (slot, node) pairs are silent.
struct HopBlock {
  int slots = 0;
  std::map<std::pair<int, NodeId>, TransmitSpec> schedule;

  bool operator==(const HopBlock&) const = default;
};

/// A time-slotted linear scheme. hops[h] holds the transmissions of layer h;
/// hop blocks run one after another.
struct Scheme {
  std::string family;
  int m = 1;
  std::vector<HopBlock> hops;
  int k1 = 0;  // flow-1 symbols a_1..a_k1
  int k2 = 0;  // flow-2 symbols b_1..b_k2

  /// Slots per block: the longest hop.
  int block_length() const;
  /// (k1 / T, k2 / T) with T = block_length().
  DofPoint declared_dof() const;
  int symbol_count() const { return k1 + k2; }
  /// Column of `s` in the joint symbol space (a's first, then b's).
  int column(const SymbolId& s) const;

  /// nullptr when (slot, node) is not scheduled in hop h.
  const TransmitSpec* find(int hop, int slot, const NodeId& node) const;
  void set(int hop, int slot, const NodeId& node, TransmitSpec spec);

  bool operator==(const Scheme&) const = default;
};

/// Throws ValidationError if the scheme references nodes, edges, slots or
/// symbols that do not exist, or if its hop count does not match the network.
void validate_scheme(const LayeredNetwork& net, const Scheme& sch);

struct LegalityViolation {
  NodeId node;
  int hop;
  int slot;
  std::optional<GainRef> gain;
  std::string reason;
};

struct LegalityReport {
  std::vector<LegalityViolation> violations;
  bool legal() const { return violations.empty(); }
};

struct LegalityOptions {
  /// Cross-node gains become known `delay` slots after they occur. Larger
  /// delays are handled by interleaving `delay` independent blocks, which
  /// stretches the timeline by the same factor.
  int delay = 1;
};

/// Checks every transmission against the delayed-CSIT knowledge model:
/// a gain at time t' may be used at time t iff t' <= t - delay, or the gain
/// is on an edge into the transmitting node with t' <= t. Also flags nodes
/// scheduled outside their hop block and sends/reconstructions that need a
/// symbol the node can never observe. Structural errors throw (see
/// validate_scheme).
LegalityReport check_csit_legality(const LayeredNetwork& net, const Scheme& sch,
                                   LegalityOptions options = {});

/// The built-in strategies, transcribed onto the generator topologies:
///  - kBottleneck: m slots per hop, declared DoF ((m-1)/m, 1);
///  - kNoBottleneck: 3 slots per hop, declared DoF (1, 1); m must be 1;
///  - kDoubleBottleneck: m+1 slots per hop, declared DoF (m/(m+1), m/(m+1)).
Scheme builtin_scheme(Family family, int m = 1);

/// {"family", "m", "hops": [{"T", "schedule": {"slot,node": spec}}],
///  "symbols": {"k1", "k2"}}; spec objects are tagged by "kind".
std::string serialize_scheme(const Scheme& sch);
Scheme parse_scheme(std::string_view text);

}  // namespace dofnet
