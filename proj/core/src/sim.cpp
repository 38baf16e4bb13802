#include "dofnet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dofnet/error.hpp"

namespace dofnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string describe(const Mode& mode) {
  if (const auto* n = std::get_if<Noisy>(&mode)) {
    std::ostringstream os;
    os << "noisy(P=" << n->power << ")";
    return os.str();
  }
  return "noiseless";
}

const NodeSignals& SignalLedger::at(const NodeId& node) const {
  auto it = nodes.find(node);
  if (it == nodes.end()) throw ValidationError("ledger has no node \"" + node + "\"");
  return it->second;
}

const Signal& SignalLedger::received(const NodeId& node, int slot) const {
  const auto& n = at(node);
  if (slot < 1 || slot > static_cast<int>(n.received.size())) {
    throw ValidationError("node \"" + node + "\" has no reception in slot " + std::to_string(slot));
  }
  return n.received[static_cast<std::size_t>(slot - 1)];
}

const Signal& SignalLedger::transmitted(const NodeId& node, int slot) const {
  const auto& n = at(node);
  if (slot < 1 || slot > static_cast<int>(n.transmitted.size())) {
    throw ValidationError("node \"" + node + "\" has no transmission in slot " + std::to_string(slot));
  }
  return n.transmitted[static_cast<std::size_t>(slot - 1)];
}

namespace {

std::string where(const NodeId& node, int hop, int slot) {
  return "hop " + std::to_string(hop) + ", slot " + std::to_string(slot) + ", node \"" + node + "\"";
}

// What one node knows at the start of its hop: each row is a linear function
// of the symbols (and noise) it can combine.
struct Knowledge {
  MatrixXd symbols;  // rows x (k1 + k2)
  MatrixXd noise;    // rows x noise_dim
};

struct Transmission {
  VectorXd recipe;
  VectorXd symbols;
};

class Executor {
 public:
  Executor(const LayeredNetwork& net, const Scheme& sch, const ChannelRealization& real, const Mode& mode,
           ExecuteOptions options)
      : net_(net), sch_(sch), real_(real), mode_(mode), options_(options) {}

  SignalLedger run() {
    const bool noisy = std::holds_alternative<Noisy>(mode_);
    if (noisy) {
      const double p = std::get<Noisy>(mode_).power;
      if (!(p > 0) || !std::isfinite(p)) throw ValidationError("transmit power must be positive and finite");
    }
    ledger_.k1 = sch_.k1;
    ledger_.k2 = sch_.k2;
    ledger_.noisy = noisy;
    ledger_.sources = net_.sources();
    ledger_.destinations = net_.destinations();
    n_ = sch_.symbol_count();

    for (const auto& node : net_.ordered_nodes()) {
      auto& ns = ledger_.nodes[node];
      ns.layer = net_.layer_of(node);
      if (ns.layer > 0 && noisy) {
        const int slots = sch_.hops[static_cast<std::size_t>(ns.layer - 1)].slots;
        for (int s = 0; s < slots; ++s) ns.noise_index.push_back(ledger_.noise_dim++);
      }
    }
    for (auto& [node, ns] : ledger_.nodes) {
      const Signal zero{VectorXd::Zero(n_), VectorXd::Zero(ledger_.noise_dim)};
      if (ns.layer > 0) ns.received.assign(static_cast<std::size_t>(slots_into(ns.layer)), zero);
      if (ns.layer + 1 < static_cast<int>(net_.layer_count())) {
        ns.transmitted.assign(static_cast<std::size_t>(sch_.hops[static_cast<std::size_t>(ns.layer)].slots), zero);
      }
    }

    for (std::size_t h = 0; h < sch_.hops.size(); ++h) {
      const int hop = static_cast<int>(h);
      transmit_layer(hop);
      for (const auto& node : net_.layers()[h + 1]) receive(node, hop);
    }
    return std::move(ledger_);
  }

 private:
  int slots_into(int layer) const { return sch_.hops[static_cast<std::size_t>(layer - 1)].slots; }

  Knowledge knowledge_of(const NodeId& node) const {
    const auto& ns = ledger_.nodes.at(node);
    Knowledge k;
    if (ns.layer == 0) {
      const Flow f = node == net_.source(Flow::kOne) ? Flow::kOne : Flow::kTwo;
      const int own = f == Flow::kOne ? sch_.k1 : sch_.k2;
      k.symbols = MatrixXd::Zero(own, n_);
      k.noise = MatrixXd::Zero(own, ledger_.noise_dim);
      for (int i = 1; i <= own; ++i) k.symbols(i - 1, sch_.column({f, i})) = 1.0;
      return k;
    }
    const auto rows = static_cast<Eigen::Index>(ns.received.size());
    k.symbols.resize(rows, n_);
    k.noise.resize(rows, ledger_.noise_dim);
    for (Eigen::Index r = 0; r < rows; ++r) {
      k.symbols.row(r) = ns.received[static_cast<std::size_t>(r)].symbols.transpose();
      k.noise.row(r) = ns.received[static_cast<std::size_t>(r)].noise.transpose();
    }
    return k;
  }

  // In noisy mode a transmitter's power normalization is folded into the
  // effective gain of its outgoing edges, so forms written in terms of
  // h_{u,v}[t] describe what v actually heard.
  double evaluate(const Coefficient& c) const {
    double v = c.value;
    for (const auto& g : c.gains) {
      v *= real_.gain(g);
      if (auto it = power_scale_.find({g.edge.from, g.slot}); it != power_scale_.end()) v *= it->second;
    }
    return v;
  }

  VectorXd unit(const SymbolId& s) const {
    VectorXd v = VectorXd::Zero(n_);
    v(sch_.column(s)) = 1.0;
    return v;
  }

  // Weights w with K^T w = target, or ReconstructionInfeasible.
  VectorXd solve(const Knowledge& k, const VectorXd& target, const std::string& ctx) const {
    const double norm = target.norm();
    if (norm == 0.0) return VectorXd::Zero(k.symbols.rows());
    if (k.symbols.rows() == 0) {
      throw ReconstructionInfeasible("reconstruction infeasible at " + ctx + ": node has received nothing");
    }
    const MatrixXd kt = k.symbols.transpose();
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(kt);
    VectorXd w = cod.solve(target);
    const double residual = (kt * w - target).norm();
    if (!(residual <= options_.reconstruction_tol * norm)) {
      std::ostringstream os;
      os << "reconstruction infeasible at " << ctx << ": requested form is not determined by the node's"
         << " received signals (relative residual " << residual / norm << ")";
      throw ReconstructionInfeasible(os.str());
    }
    return w;
  }

  Transmission eval(const TransmitSpec& spec, const Knowledge& k, const std::string& ctx) const {
    const auto rows = k.symbols.rows();
    Transmission out{VectorXd::Zero(rows), VectorXd::Zero(n_)};
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SendSymbol>) {
            const double c = evaluate(s.scale);
            const VectorXd target = unit(s.symbol);
            out.recipe = c * solve(k, target, ctx);
            out.symbols = c * target;
          } else if constexpr (std::is_same_v<T, ReplayReceived>) {
            const double c = evaluate(s.scale);
            if (s.slot < 1 || s.slot > rows) throw ValidationError(ctx + ": replay of nonexistent slot");
            out.recipe(s.slot - 1) = c;
            out.symbols = c * k.symbols.row(s.slot - 1).transpose();
          } else if constexpr (std::is_same_v<T, SendReconstruction>) {
            const double c = evaluate(s.scale);
            VectorXd target = VectorXd::Zero(n_);
            for (const auto& t : s.target) target(sch_.column(t.symbol)) += evaluate(t.coefficient);
            out.recipe = c * solve(k, target, ctx);
            out.symbols = c * target;
          } else if constexpr (std::is_same_v<T, LinearCombo>) {
            for (const auto& t : s.terms) {
              const Transmission sub = eval(t.spec, k, ctx);
              out.recipe += t.weight * sub.recipe;
              out.symbols += t.weight * sub.symbols;
            }
          }
        },
        spec.kind);
    return out;
  }

  // Slot-major so that, within a hop, a normalization referenced by a later
  // slot is always known.
  void transmit_layer(int hop) {
    const auto& layer = net_.layers()[static_cast<std::size_t>(hop)];
    const int slots = sch_.hops[static_cast<std::size_t>(hop)].slots;
    std::vector<Knowledge> known;
    for (const auto& node : layer) {
      known.push_back(knowledge_of(node));
      ledger_.nodes.at(node).recipes.assign(static_cast<std::size_t>(slots),
                                            VectorXd::Zero(known.back().symbols.rows()));
    }
    for (int s = 1; s <= slots; ++s) {
      for (std::size_t i = 0; i < layer.size(); ++i) transmit(layer[i], known[i], hop, s);
    }
  }

  void transmit(const NodeId& node, const Knowledge& k, int hop, int s) {
    const TransmitSpec* spec = sch_.find(hop, s, node);
    if (spec == nullptr) return;
    Transmission t = eval(*spec, k, where(node, hop, s));
    VectorXd noise = k.noise.transpose() * t.recipe;
    if (const auto* noisy = std::get_if<Noisy>(&mode_)) {
      const double energy = t.symbols.squaredNorm() + noise.squaredNorm();
      if (energy > 0) {
        const double g = std::sqrt(noisy->power / energy);
        t.recipe *= g;
        t.symbols *= g;
        noise *= g;
        power_scale_[{node, s}] = g;
      }
    }
    auto& ns = ledger_.nodes.at(node);
    ns.recipes[static_cast<std::size_t>(s - 1)] = std::move(t.recipe);
    ns.transmitted[static_cast<std::size_t>(s - 1)] = {std::move(t.symbols), std::move(noise)};
  }

  void receive(const NodeId& node, int hop) {
    auto& ns = ledger_.nodes.at(node);
    const int idx = net_.index_of(node);
    for (int s = 1; s <= static_cast<int>(ns.received.size()); ++s) {
      Signal& y = ns.received[static_cast<std::size_t>(s - 1)];
      for (int p : net_.parent_indices(idx)) {
        const NodeId& parent = net_.name_of(p);
        if (sch_.find(hop, s, parent) == nullptr) continue;
        const double h = real_.gain({parent, node}, s);
        const Signal& x = ledger_.nodes.at(parent).transmitted[static_cast<std::size_t>(s - 1)];
        y.symbols += h * x.symbols;
        y.noise += h * x.noise;
      }
      if (ledger_.noisy) y.noise(ns.noise_index[static_cast<std::size_t>(s - 1)]) += 1.0;
    }
  }

  const LayeredNetwork& net_;
  const Scheme& sch_;
  const ChannelRealization& real_;
  const Mode& mode_;
  ExecuteOptions options_;
  Eigen::Index n_ = 0;
  SignalLedger ledger_;
  std::map<std::pair<NodeId, int>, double> power_scale_;
};

void require_legal(const LayeredNetwork& net, const Scheme& sch) {
  const LegalityReport report = check_csit_legality(net, sch);
  if (report.legal()) return;
  const auto& v = report.violations.front();
  std::string msg = "illegal scheme: " + where(v.node, v.hop, v.slot) + ": " + v.reason;
  if (report.violations.size() > 1) {
    msg += " (and " + std::to_string(report.violations.size() - 1) + " more)";
  }
  throw ValidationError(msg);
}

MatrixXd stack_received(const SignalLedger& ledger, const NodeId& node, bool noise) {
  const auto& ns = ledger.at(node);
  const auto rows = static_cast<Eigen::Index>(ns.received.size());
  const Eigen::Index cols = noise ? ledger.noise_dim : ledger.k1 + ledger.k2;
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& sig = ns.received[static_cast<std::size_t>(r)];
    m.row(r) = (noise ? sig.noise : sig.symbols).transpose();
  }
  return m;
}

VectorXd singular_values(const MatrixXd& m) {
  if (m.size() == 0) return VectorXd();
  return Eigen::JacobiSVD<MatrixXd>(m).singularValues();
}

int count_above(const VectorXd& sv, double threshold) {
  return static_cast<int>((sv.array() > threshold).count());
}

struct Split {
  MatrixXd own;
  MatrixXd other;
};

Split split_columns(const SignalLedger& ledger, const MatrixXd& m, Flow destination) {
  if (destination == Flow::kOne) return {m.leftCols(ledger.k1), m.rightCols(ledger.k2)};
  return {m.rightCols(ledger.k2), m.leftCols(ledger.k1)};
}

// Orthonormal basis of the complement of col(b) in R^rows, with directions
// whose singular value falls below `threshold` treated as absent from col(b).
MatrixXd complement_basis(const MatrixXd& b, Eigen::Index rows, double threshold) {
  if (b.cols() == 0 || rows == 0) return MatrixXd::Identity(rows, rows);
  Eigen::JacobiSVD<MatrixXd> svd(b, Eigen::ComputeFullU);
  const int r = count_above(svd.singularValues(), threshold);
  return svd.matrixU().rightCols(rows - r);
}

}  // namespace

SignalLedger execute(const LayeredNetwork& net, const Scheme& sch, const ChannelRealization& real,
                     const Mode& mode, ExecuteOptions options) {
  require_legal(net, sch);
  return Executor(net, sch, real, mode, options).run();
}

std::map<NodeId, std::vector<double>> evaluate_signals(const LayeredNetwork& net, const Scheme& sch,
                                                       const ChannelRealization& real,
                                                       const SignalLedger& ledger,
                                                       const VectorXd& symbol_values,
                                                       const VectorXd& noise_values) {
  if (symbol_values.size() != sch.symbol_count()) throw ValidationError("symbol value count mismatch");
  if (ledger.noisy && noise_values.size() != ledger.noise_dim) {
    throw ValidationError("noise value count mismatch");
  }
  std::map<NodeId, std::vector<double>> received;
  std::map<NodeId, std::vector<double>> sent;
  for (std::size_t h = 0; h < sch.hops.size(); ++h) {
    const int hop = static_cast<int>(h);
    const int slots = sch.hops[h].slots;
    for (const auto& node : net.layers()[h]) {
      std::vector<double> known;
      if (h == 0) {
        const Flow f = node == net.source(Flow::kOne) ? Flow::kOne : Flow::kTwo;
        const int own = f == Flow::kOne ? sch.k1 : sch.k2;
        for (int i = 1; i <= own; ++i) known.push_back(symbol_values(sch.column({f, i})));
      } else {
        known = received.at(node);
      }
      const auto& recipes = ledger.at(node).recipes;
      auto& x = sent[node];
      x.assign(static_cast<std::size_t>(slots), 0.0);
      for (int s = 0; s < slots; ++s) {
        const VectorXd& w = recipes[static_cast<std::size_t>(s)];
        double v = 0;
        for (std::size_t r = 0; r < known.size(); ++r) v += w(static_cast<Eigen::Index>(r)) * known[r];
        x[static_cast<std::size_t>(s)] = v;
      }
    }
    for (const auto& node : net.layers()[h + 1]) {
      auto& y = received[node];
      y.assign(static_cast<std::size_t>(slots), 0.0);
      const auto& ns = ledger.at(node);
      for (int s = 1; s <= slots; ++s) {
        double v = 0;
        for (int p : net.parent_indices(net.index_of(node))) {
          const NodeId& parent = net.name_of(p);
          if (sch.find(hop, s, parent) == nullptr) continue;
          v += real.gain({parent, node}, s) * sent.at(parent)[static_cast<std::size_t>(s - 1)];
        }
        if (ledger.noisy) v += noise_values(ns.noise_index[static_cast<std::size_t>(s - 1)]);
        y[static_cast<std::size_t>(s - 1)] = v;
      }
    }
  }
  return received;
}

DecodeCheck decode_check(const SignalLedger& ledger, Flow destination, double tol) {
  const NodeId& node = destination == Flow::kOne ? ledger.destinations.first : ledger.destinations.second;
  const int k_own = destination == Flow::kOne ? ledger.k1 : ledger.k2;
  const MatrixXd m = stack_received(ledger, node, false);
  const auto [own, other] = split_columns(ledger, m, destination);

  const VectorXd sv_all = singular_values(m);
  const double sigma_max = sv_all.size() > 0 ? sv_all.maxCoeff() : 0.0;
  DecodeCheck out;
  if (sigma_max == 0.0) {
    out.decodable = k_own == 0;
    return out;
  }
  const double threshold = tol * sigma_max;
  out.rank_all = count_above(sv_all, threshold);
  out.rank_interference = count_above(singular_values(other), threshold);
  out.decodable = out.rank_all - out.rank_interference == k_own;
  if (k_own > 0) {
    const MatrixXd q = complement_basis(other, m.rows(), threshold);
    const VectorXd sv = singular_values(q.transpose() * own);
    out.min_singular_value = sv.size() >= k_own ? sv(k_own - 1) / sigma_max : 0.0;
  }
  return out;
}

bool decodable(const SignalLedger& ledger, Flow destination, double tol) {
  return decode_check(ledger, destination, tol).decodable;
}

std::optional<double> zero_forcing_mse(const SignalLedger& ledger, Flow destination, double tol) {
  const int k_own = destination == Flow::kOne ? ledger.k1 : ledger.k2;
  if (!ledger.noisy || k_own == 0 || !decodable(ledger, destination, tol)) return std::nullopt;
  const NodeId& node = destination == Flow::kOne ? ledger.destinations.first : ledger.destinations.second;
  const MatrixXd m = stack_received(ledger, node, false);
  const MatrixXd noise = stack_received(ledger, node, true);
  const auto [own, other] = split_columns(ledger, m, destination);
  const VectorXd sv_all = singular_values(m);
  const MatrixXd q = complement_basis(other, m.rows(), tol * sv_all.maxCoeff());
  // Null the interference, then invert the own-symbol map; the residual
  // estimation error is G z with z the unit-variance noise samples.
  const MatrixXd a = q.transpose() * own;
  const MatrixXd g = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(a).solve(q.transpose() * noise);
  return g.squaredNorm() / k_own;
}

// --- Monte Carlo -----------------------------------------------------------------

namespace {

std::optional<Stats> stats_of(const std::vector<TrialRecord>& records,
                              std::optional<double> TrialRecord::*field) {
  std::optional<Stats> out;
  double sum = 0;
  int count = 0;
  for (const auto& r : records) {
    const auto& v = r.*field;
    if (!v) continue;
    if (!out) out = Stats{*v, 0, *v};
    out->min = std::min(out->min, *v);
    out->max = std::max(out->max, *v);
    sum += *v;
    ++count;
  }
  if (out) out->mean = sum / count;
  return out;
}

}  // namespace

SimulationReport monte_carlo(const LayeredNetwork& net, const Scheme& sch, const MonteCarloConfig& config) {
  if (config.trials < 0) throw ValidationError("trial count must be non-negative");
  if (config.threads < 1) throw ValidationError("thread count must be at least 1");
  if (!(config.tol > 0) || !(config.tol < 1)) throw ValidationError("rank tolerance must lie in (0, 1)");
  require_legal(net, sch);

  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<TrialRecord> records(trials);
  std::vector<std::optional<std::string>> failures(trials);

  auto run_trial = [&](std::size_t t) {
    const std::uint64_t ts = trial_seed(config.seed, t);
    TrialRecord& rec = records[t];
    rec.trial = static_cast<int>(t);
    rec.seed = ts;
    try {
      const ChannelRealization real = ChannelRealization::draw(net, sch, ts);
      const SignalLedger ledger = Executor(net, sch, real, config.mode, {}).run();
      const DecodeCheck c1 = decode_check(ledger, Flow::kOne, config.tol);
      const DecodeCheck c2 = decode_check(ledger, Flow::kTwo, config.tol);
      rec.decodable_d1 = c1.decodable;
      rec.decodable_d2 = c2.decodable;
      rec.min_sv_d1 = c1.min_singular_value;
      rec.min_sv_d2 = c2.min_singular_value;
      rec.mse_d1 = zero_forcing_mse(ledger, Flow::kOne, config.tol);
      rec.mse_d2 = zero_forcing_mse(ledger, Flow::kTwo, config.tol);
    } catch (const std::exception& e) {
      failures[t] = e.what();
    }
  };

  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), std::max<std::size_t>(trials, 1));
  if (threads <= 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < trials; t += threads) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t t = 0; t < trials; ++t) {
    if (failures[t]) {
      throw TrialFailure("trial " + std::to_string(t) + " (seed " + std::to_string(records[t].seed) +
                             ") failed: " + *failures[t],
                         records[t].seed, static_cast<int>(t));
    }
  }

  SimulationReport report;
  report.trials = config.trials;
  report.seed = config.seed;
  report.mode = describe(config.mode);
  report.tol = config.tol;
  report.declared_dof = sch.declared_dof();
  for (const auto& r : records) {
    report.decodable_d1 += r.decodable_d1 ? 1 : 0;
    report.decodable_d2 += r.decodable_d2 ? 1 : 0;
  }
  if (config.trials > 0 && report.decodable_d1 == config.trials && report.decodable_d2 == config.trials) {
    report.achieved_dof = report.declared_dof;
  }
  report.min_sv_d1 = stats_of(records, &TrialRecord::min_sv_d1);
  report.min_sv_d2 = stats_of(records, &TrialRecord::min_sv_d2);
  report.mse_d1 = stats_of(records, &TrialRecord::mse_d1);
  report.mse_d2 = stats_of(records, &TrialRecord::mse_d2);
  report.per_trial = std::move(records);
  return report;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson point_json(const DofPoint& p) {
  ojson j;
  j["d1"] = to_string(p.d1);
  j["d2"] = to_string(p.d2);
  return j;
}

ojson stats_json(const std::optional<Stats>& s) {
  if (!s) return nullptr;
  ojson j;
  j["min"] = s->min;
  j["mean"] = s->mean;
  j["max"] = s->max;
  return j;
}

std::string csv_value(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << *v;
  return os.str();
}

}  // namespace

std::string serialize_simulation_report(const SimulationReport& r) {
  ojson doc;
  doc["trials"] = r.trials;
  doc["seed"] = r.seed;
  doc["mode"] = r.mode;
  doc["tol"] = r.tol;
  doc["declared_dof"] = point_json(r.declared_dof);
  doc["decodable"]["d1"] = r.decodable_d1;
  doc["decodable"]["d2"] = r.decodable_d2;
  doc["achieved_dof"] = r.achieved_dof ? point_json(*r.achieved_dof) : ojson(nullptr);
  doc["min_singular_value"]["d1"] = stats_json(r.min_sv_d1);
  doc["min_singular_value"]["d2"] = stats_json(r.min_sv_d2);
  if (r.mse_d1 || r.mse_d2) {
    doc["zero_forcing_mse"]["d1"] = stats_json(r.mse_d1);
    doc["zero_forcing_mse"]["d2"] = stats_json(r.mse_d2);
  }
  return doc.dump(2) + "\n";
}

std::string simulation_csv(const SimulationReport& r) {
  std::ostringstream os;
  os << "trial,seed,d1_decodable,d2_decodable,d1_min_sv,d2_min_sv,d1_mse,d2_mse\n";
  for (const auto& t : r.per_trial) {
    os << t.trial << ',' << t.seed << ',' << (t.decodable_d1 ? 1 : 0) << ',' << (t.decodable_d2 ? 1 : 0) << ','
       << csv_value(t.min_sv_d1) << ',' << csv_value(t.min_sv_d2) << ',' << csv_value(t.mse_d1) << ','
       << csv_value(t.mse_d2) << '\n';
  }
  return os.str();
}

}  // namespace dofnet
