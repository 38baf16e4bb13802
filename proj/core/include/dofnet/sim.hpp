#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dofnet/dof.hpp"
#include "dofnet/network.hpp"
#include "dofnet/scheme.hpp"

namespace dofnet {

// --- channel -------------------------------------------------------------------

/// Gains below this magnitude are redrawn.
inline constexpr double kMinGainMagnitude = 1e-3;

/// h_{u,v}[t] for every (edge, slot) a scheme can touch. Gains are i.i.d.
/// standard normal, each derived from (seed, edge index, slot) alone so the
/// assignment does not depend on iteration order.
class ChannelRealization {
 public:
  ChannelRealization() = default;
  explicit ChannelRealization(std::uint64_t seed) : seed_(seed) {}

  /// Draws a gain for every edge at every slot of the edge's hop block.
  static ChannelRealization draw(const LayeredNetwork& net, const Scheme& sch, std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  void set(const Edge& e, int slot, double value) { gains_[{e, slot}] = value; }
  bool has(const Edge& e, int slot) const { return gains_.contains({e, slot}); }
  /// Throws MissingGain if absent.
  double gain(const Edge& e, int slot) const;
  double gain(const GainRef& g) const { return gain(g.edge, g.slot); }
  std::size_t size() const { return gains_.size(); }

 private:
  std::uint64_t seed_ = 0;
  std::map<std::pair<Edge, int>, double> gains_;
};

/// One standard-normal gain with the conditioning guard applied; a pure
/// function of its arguments.
double draw_gain(std::uint64_t seed, std::size_t edge_index, int slot);

/// Seed of trial `trial` in a Monte Carlo run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

// --- execution -----------------------------------------------------------------

struct Noiseless {};
struct Noisy {
  double power;  // transmit power P; receiver noise has unit variance
};
using Mode = std::variant<Noiseless, Noisy>;

std::string describe(const Mode& mode);

/// A signal as a linear function of the symbols (a_1..a_k1, b_1..b_k2) and,
/// in noisy mode, of the receiver noise samples.
struct Signal {
  Eigen::VectorXd symbols;
  Eigen::VectorXd noise;
};

struct NodeSignals {
  int layer = 0;
  /// Indexed by slot - 1 of the incoming hop block; empty for sources.
  std::vector<Signal> received;
  /// Indexed by slot - 1 of the node's own hop block; empty for destinations.
  std::vector<Signal> transmitted;
  /// Weights over the node's knowledge rows (own symbols for a source, the
  /// received signals otherwise) that produce each transmission.
  std::vector<Eigen::VectorXd> recipes;
  /// Noise sample index of each reception; empty in noiseless mode.
  std::vector<int> noise_index;
};

struct SignalLedger {
  int k1 = 0;
  int k2 = 0;
  int noise_dim = 0;
  bool noisy = false;
  std::pair<NodeId, NodeId> sources;
  std::pair<NodeId, NodeId> destinations;
  std::map<NodeId, NodeSignals> nodes;

  const NodeSignals& at(const NodeId& node) const;
  /// Received signal of `node` in `slot` (1-based) of its incoming hop.
  const Signal& received(const NodeId& node, int slot) const;
  const Signal& transmitted(const NodeId& node, int slot) const;
};

struct ExecuteOptions {
  /// Relative residual above which a requested linear form is declared not
  /// determined by the node's history.
  double reconstruction_tol = 1e-8;
};

/// Runs `sch` over `real`, hop block by hop block and slot by slot.
/// Throws ValidationError if the scheme is illegal, ReconstructionInfeasible
/// if a node is asked for a form its history does not determine, and
/// MissingGain if `real` lacks a needed gain.
SignalLedger execute(const LayeredNetwork& net, const Scheme& sch, const ChannelRealization& real,
                     const Mode& mode = Noiseless{}, ExecuteOptions options = {});

/// Received values computed scalar by scalar from symbol and noise values,
/// following the recipes stored in `ledger`. Independent of the ledger's
/// coefficient vectors; used to cross-check them.
std::map<NodeId, std::vector<double>> evaluate_signals(const LayeredNetwork& net, const Scheme& sch,
                                                       const ChannelRealization& real,
                                                       const SignalLedger& ledger,
                                                       const Eigen::VectorXd& symbol_values,
                                                       const Eigen::VectorXd& noise_values);

inline constexpr double kDefaultRankTol = 1e-8;

struct DecodeCheck {
  bool decodable = false;
  int rank_all = 0;           // rank [A | B]
  int rank_interference = 0;  // rank B
  /// k_own-th singular value of A after projecting out span(B), relative to
  /// the largest singular value of [A | B]. Absent when k_own = 0 or the
  /// destination received nothing.
  std::optional<double> min_singular_value;
};

/// Stacks the destination's received vectors into [A | B] (A: own-flow
/// columns) and tests rank [A | B] - rank B = k_own. Singular values below
/// tol × sigma_max([A | B]) count as zero.
DecodeCheck decode_check(const SignalLedger& ledger, Flow destination, double tol = kDefaultRankTol);
bool decodable(const SignalLedger& ledger, Flow destination, double tol = kDefaultRankTol);

/// Mean squared error per own symbol of zero-forcing decoding in noisy mode.
/// Absent if the destination cannot decode or owns no symbols.
std::optional<double> zero_forcing_mse(const SignalLedger& ledger, Flow destination,
                                       double tol = kDefaultRankTol);

// --- Monte Carlo -----------------------------------------------------------------

struct MonteCarloConfig {
  int trials = 100;
  std::uint64_t seed = 1;
  Mode mode = Noiseless{};
  double tol = kDefaultRankTol;
  int threads = 1;
};

struct TrialRecord {
  int trial;
  std::uint64_t seed;
  bool decodable_d1;
  bool decodable_d2;
  std::optional<double> min_sv_d1;
  std::optional<double> min_sv_d2;
  std::optional<double> mse_d1;
  std::optional<double> mse_d2;
};

struct Stats {
  double min;
  double mean;
  double max;
};

struct SimulationReport {
  int trials = 0;
  std::uint64_t seed = 0;
  std::string mode;
  double tol = kDefaultRankTol;
  int decodable_d1 = 0;
  int decodable_d2 = 0;
  DofPoint declared_dof;
  /// Present only when every trial decoded at both destinations.
  std::optional<DofPoint> achieved_dof;
  std::optional<Stats> min_sv_d1;
  std::optional<Stats> min_sv_d2;
  std::optional<Stats> mse_d1;
  std::optional<Stats> mse_d2;
  std::vector<TrialRecord> per_trial;
};

/// Executes and decodes `config.trials` independent realizations. The result
/// depends only on (net, sch, config), not on the thread count. Execution
/// errors are rethrown as TrialFailure carrying the failing trial's seed.
SimulationReport monte_carlo(const LayeredNetwork& net, const Scheme& sch,
                             const MonteCarloConfig& config);

std::string serialize_simulation_report(const SimulationReport& report);

/// Columns: trial,seed,d1_decodable,d2_decodable,d1_min_sv,d2_min_sv,d1_mse,d2_mse
std::string simulation_csv(const SimulationReport& report);

}  // namespace dofnet
