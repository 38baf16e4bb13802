#include "dofnet/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dofnet/error.hpp"

namespace dofnet {

std::string to_string(const SymbolId& s) {
  return (s.flow == Flow::kOne ? "a" : "b") + std::to_string(s.index);
}

SymbolId parse_symbol(std::string_view text) {
  if (text.size() < 2 || (text[0] != 'a' && text[0] != 'b')) {
    throw ValidationError("invalid symbol \"" + std::string(text) + "\" (expected a<k> or b<k>)");
  }
  int index = 0;
  for (char c : text.substr(1)) {
    if (c < '0' || c > '9' || index > 1'000'000) {
      throw ValidationError("invalid symbol \"" + std::string(text) + "\"");
    }
    index = index * 10 + (c - '0');
  }
  if (index < 1) throw ValidationError("invalid symbol \"" + std::string(text) + "\"");
  return {text[0] == 'a' ? Flow::kOne : Flow::kTwo, index};
}

int Scheme::block_length() const {
  int t = 0;
  for (const auto& h : hops) t = std::max(t, h.slots);
  return t;
}

DofPoint Scheme::declared_dof() const {
  const int t = block_length();
  if (t == 0) return {0, 0};
  return {Rational(k1, t), Rational(k2, t)};
}

int Scheme::column(const SymbolId& s) const {
  return s.flow == Flow::kOne ? s.index - 1 : k1 + s.index - 1;
}

const TransmitSpec* Scheme::find(int hop, int slot, const NodeId& node) const {
  if (hop < 0 || hop >= static_cast<int>(hops.size())) return nullptr;
  const auto& sched = hops[static_cast<std::size_t>(hop)].schedule;
  auto it = sched.find({slot, node});
  return it == sched.end() ? nullptr : &it->second;
}

void Scheme::set(int hop, int slot, const NodeId& node, TransmitSpec spec) {
  hops.at(static_cast<std::size_t>(hop)).schedule[{slot, node}] = std::move(spec);
}

namespace {

std::string where(const NodeId& node, int hop, int slot) {
  return "hop " + std::to_string(hop) + ", slot " + std::to_string(slot) + ", node \"" + node + "\"";
}

std::string gain_name(const GainRef& g) {
  return "h_{" + g.edge.from + "," + g.edge.to + "}[" + std::to_string(g.slot) + "]";
}

// Visits every coefficient of a spec, recursively.
template <typename F>
void for_each_coefficient(const TransmitSpec& spec, F&& f) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SendSymbol> || std::is_same_v<T, ReplayReceived>) {
          f(s.scale);
        } else if constexpr (std::is_same_v<T, SendReconstruction>) {
          f(s.scale);
          for (const auto& t : s.target) f(t.coefficient);
        } else if constexpr (std::is_same_v<T, LinearCombo>) {
          for (const auto& t : s.terms) for_each_coefficient(t.spec, f);
        }
      },
      spec.kind);
}

void validate_symbol(const Scheme& sch, const SymbolId& s, const std::string& ctx) {
  const int k = s.flow == Flow::kOne ? sch.k1 : sch.k2;
  if (s.index < 1 || s.index > k) {
    throw ValidationError(ctx + ": symbol " + to_string(s) + " is not declared (k" +
                          std::to_string(Index(s.flow)) + " = " + std::to_string(k) + ")");
  }
}

void validate_spec(const LayeredNetwork& net, const Scheme& sch, const TransmitSpec& spec,
                   const NodeId& node, const std::string& ctx) {
  for_each_coefficient(spec, [&](const Coefficient& c) {
    if (!std::isfinite(c.value)) throw ValidationError(ctx + ": non-finite coefficient");
    for (const auto& g : c.gains) {
      if (!net.contains(g.edge.from) || !net.contains(g.edge.to) ||
          !net.has_edge(g.edge.from, g.edge.to)) {
        throw ValidationError(ctx + ": gain " + gain_name(g) + " refers to a nonexistent edge");
      }
      const int hop = net.layer_of(g.edge.from);
      if (g.slot < 1 || g.slot > sch.hops[static_cast<std::size_t>(hop)].slots) {
        throw ValidationError(ctx + ": gain " + gain_name(g) + " refers to a nonexistent slot");
      }
    }
  });
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SendSymbol>) {
          validate_symbol(sch, s.symbol, ctx);
        } else if constexpr (std::is_same_v<T, ReplayReceived>) {
          const int layer = net.layer_of(node);
          if (layer > 0 && (s.slot < 1 || s.slot > sch.hops[static_cast<std::size_t>(layer - 1)].slots)) {
            throw ValidationError(ctx + ": replay of nonexistent slot " + std::to_string(s.slot));
          }
        } else if constexpr (std::is_same_v<T, SendReconstruction>) {
          for (const auto& t : s.target) validate_symbol(sch, t.symbol, ctx);
        } else if constexpr (std::is_same_v<T, LinearCombo>) {
          for (const auto& t : s.terms) {
            if (!std::isfinite(t.weight)) throw ValidationError(ctx + ": non-finite combo weight");
            validate_spec(net, sch, t.spec, node, ctx);
          }
        }
      },
      spec.kind);
}

}  // namespace

void validate_scheme(const LayeredNetwork& net, const Scheme& sch) {
  if (sch.hops.size() + 1 != net.layer_count()) {
    throw ValidationError("scheme has " + std::to_string(sch.hops.size()) + " hop blocks but the network has " +
                          std::to_string(net.layer_count() - 1) + " hops");
  }
  if (sch.k1 < 0 || sch.k2 < 0) throw ValidationError("symbol counts must be non-negative");
  for (std::size_t h = 0; h < sch.hops.size(); ++h) {
    const auto& hop = sch.hops[h];
    if (hop.slots < 1) throw ValidationError("hop " + std::to_string(h) + " has no slots");
    for (const auto& [key, spec] : hop.schedule) {
      const auto& [slot, node] = key;
      const std::string ctx = where(node, static_cast<int>(h), slot);
      if (!net.contains(node)) throw ValidationError(ctx + ": unknown node");
      if (slot < 1 || slot > hop.slots) throw ValidationError(ctx + ": nonexistent slot");
      validate_spec(net, sch, spec, node, ctx);
    }
  }
}

// --- legality ----------------------------------------------------------------

namespace {

using Support = std::set<SymbolId>;

class LegalityChecker {
 public:
  LegalityChecker(const LayeredNetwork& net, const Scheme& sch, LegalityOptions opt)
      : net_(net), sch_(sch), opt_(opt), received_(net.node_count()), knows_(net.node_count()) {
    int offset = 0;
    for (const auto& h : sch.hops) {
      offsets_.push_back(offset);
      offset += h.slots;
    }
    for (Flow f : {Flow::kOne, Flow::kTwo}) {
      auto& k = knows_[static_cast<std::size_t>(net.index_of(net.source(f)))];
      for (int i = 1; i <= (f == Flow::kOne ? sch.k1 : sch.k2); ++i) k.insert({f, i});
    }
  }

  LegalityReport run() {
    for (std::size_t h = 0; h < sch_.hops.size(); ++h) {
      const int hop = static_cast<int>(h);
      const auto& block = sch_.hops[h];
      for (const auto& layer_node : net_.layers()[h + 1]) {
        received_[static_cast<std::size_t>(net_.index_of(layer_node))].assign(
            static_cast<std::size_t>(block.slots), {});
      }
      for (const auto& [key, spec] : block.schedule) {
        const auto& [slot, node] = key;
        if (net_.layer_of(node) != hop) {
          report_.violations.push_back({node, hop, slot, std::nullopt,
                                        "transmits outside its hop block (layer " +
                                            std::to_string(net_.layer_of(node)) + ")"});
          continue;
        }
        check_gains(spec, node, hop, slot);
        const Support out = transmit_support(spec, node, hop, slot);
        const int from = net_.index_of(node);
        for (int child : net_.child_indices(from)) {
          auto& r = received_[static_cast<std::size_t>(child)][static_cast<std::size_t>(slot - 1)];
          r.insert(out.begin(), out.end());
          knows_[static_cast<std::size_t>(child)].insert(out.begin(), out.end());
        }
      }
    }
    return std::move(report_);
  }

 private:
  long time_of(int hop, int slot) const {
    return static_cast<long>(opt_.delay) * (offsets_[static_cast<std::size_t>(hop)] + slot);
  }

  void check_gains(const TransmitSpec& spec, const NodeId& node, int hop, int slot) {
    const long now = time_of(hop, slot);
    for_each_coefficient(spec, [&](const Coefficient& c) {
      for (const auto& g : c.gains) {
        const long then = time_of(net_.layer_of(g.edge.from), g.slot);
        const bool own_incoming = g.edge.to == node;
        if (then <= now - opt_.delay || (own_incoming && then <= now)) continue;
        report_.violations.push_back(
            {node, hop, slot, g,
             then > now ? "future gain " + gain_name(g)
                        : "instantaneous cross-node gain " + gain_name(g)});
      }
    });
  }

  Support transmit_support(const TransmitSpec& spec, const NodeId& node, int hop, int slot) {
    const auto idx = static_cast<std::size_t>(net_.index_of(node));
    Support out;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SendSymbol>) {
            require(node, hop, slot, s.symbol, "send");
            out.insert(s.symbol);
          } else if constexpr (std::is_same_v<T, ReplayReceived>) {
            if (hop == 0) {
              report_.violations.push_back(
                  {node, hop, slot, std::nullopt, "replay by a source, which receives nothing"});
              return;
            }
            const auto& r = received_[idx][static_cast<std::size_t>(s.slot - 1)];
            out.insert(r.begin(), r.end());
          } else if constexpr (std::is_same_v<T, SendReconstruction>) {
            for (const auto& t : s.target) {
              require(node, hop, slot, t.symbol, "reconstruction");
              out.insert(t.symbol);
            }
          } else if constexpr (std::is_same_v<T, LinearCombo>) {
            for (const auto& t : s.terms) {
              const Support sub = transmit_support(t.spec, node, hop, slot);
              out.insert(sub.begin(), sub.end());
            }
          }
        },
        spec.kind);
    return out;
  }

  void require(const NodeId& node, int hop, int slot, const SymbolId& sym, const char* what) {
    const auto& k = knows_[static_cast<std::size_t>(net_.index_of(node))];
    if (k.contains(sym)) return;
    report_.violations.push_back({node, hop, slot, std::nullopt,
                                  std::string(what) + " infeasible: node never observes symbol " +
                                      to_string(sym)});
  }

  const LayeredNetwork& net_;
  const Scheme& sch_;
  LegalityOptions opt_;
  std::vector<int> offsets_;
  // Per node, per slot of its incoming hop: symbols that may appear.
  std::vector<std::vector<Support>> received_;
  std::vector<Support> knows_;
  LegalityReport report_;
};

}  // namespace

LegalityReport check_csit_legality(const LayeredNetwork& net, const Scheme& sch,
                                   LegalityOptions options) {
  if (options.delay < 1) throw ValidationError("delay must be at least 1");
  validate_scheme(net, sch);
  return LegalityChecker(net, sch, options).run();
}

}  // namespace dofnet
