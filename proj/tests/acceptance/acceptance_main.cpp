// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dofnet/cuts.hpp"
#include "dofnet/dof.hpp"
#include "dofnet/scheme.hpp"
#include "dofnet/sim.hpp"
#include "support/canned.hpp"
#include "support/oracles.hpp"

namespace {

using namespace dofnet;
using Clock = std::chrono::steady_clock;

// Wall-clock limits per criterion, in seconds. 0 means no limit.
constexpr double kLimitAc1 = 1.0;
constexpr double kLimitAc2 = 10.0;
constexpr double kLimitAc3 = 10.0;
constexpr double kLimitAc4 = 2.0;
constexpr double kLimitAc5 = 0.0;
constexpr double kLimitAc6 = 60.0;
constexpr double kLimitAc7 = 0.0;

constexpr int kTrials = 100;
constexpr int kGenericityFloor = 99;  // of kTrials fresh seeds
constexpr double kSelfConsistencyTol = 1e-9;
constexpr int kCutNetworks = 200;
constexpr int kBottleneckNetworks = 50;

// Collects failures; a criterion passes when nothing was recorded.
struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

DofRegion region_of(const LayeredNetwork& net) { return build_region(net, analyze(net)); }

std::string str(const DofPoint& p) { return describe(p); }

void ac1(Checker& c) {
  const auto net = gen_bottleneck_family(3);
  const auto report = analyze(net);
  c.expect(report.bottlenecks.size() == 1, "expected one bottleneck record");
  if (!report.bottlenecks.empty()) {
    const auto& b = report.bottlenecks[0];
    c.expect(b.node == "w" && b.destination == Flow::kOne && b.minimal_m == 3, "bottleneck is not (w, d1, m=3)");
  }
  const auto region = build_region(net, report);
  // a1, a2, rhs of a1*D1 + a2*D2 <= rhs, in region order
  const std::vector<std::array<int, 3>> want{{-1, 0, 0}, {0, -1, 0}, {1, 0, 1}, {0, 1, 1}, {3, 1, 3}};
  c.expect(region.constraints.size() == want.size(), "constraint count");
  for (std::size_t i = 0; i < std::min(want.size(), region.constraints.size()); ++i) {
    const auto& g = region.constraints[i];
    c.expect(g.a1 == R(want[i][0]) && g.a2 == R(want[i][1]) && g.rhs == R(want[i][2]), "constraint " + describe(g));
  }
  bool has_corner = false;
  for (const auto& v : region.vertices) has_corner = has_corner || v == DofPoint{R(2, 3), R(1)};
  c.expect(has_corner, "vertex (2/3, 1) missing");
  c.expect(region.max_sum == R(5, 3), "max_sum " + to_string(region.max_sum));
}

void ac2(Checker& c) {
  for (int m = 1; m <= 6; ++m) {
    const auto net = gen_bottleneck_family(m);
    const Rational outer = region_of(net).max_sum;
    c.expect(outer == R(2) - R(1, m), "m=" + std::to_string(m) + " max_sum " + to_string(outer));
    const auto rep = monte_carlo(net, builtin_scheme(Family::kBottleneck, m), {.trials = kTrials, .seed = 1});
    c.expect(rep.decodable_d1 == kTrials && rep.decodable_d2 == kTrials,
             "m=" + std::to_string(m) + " decodability " + std::to_string(rep.decodable_d1) + "/" +
                 std::to_string(rep.decodable_d2));
    c.expect(rep.achieved_dof == DofPoint{R(m - 1, m), R(1)}, "m=" + std::to_string(m) + " achieved");
  }
}

void ac3(Checker& c) {
  for (int m = 1; m <= 5; ++m) {
    const auto net = gen_double_bottleneck_family(m);
    const auto report = analyze(net);
    c.expect(report.bottlenecks.size() == 2, "m=" + std::to_string(m) + " record count");
    bool d1 = false, d2 = false;
    for (const auto& b : report.bottlenecks) {
      d1 = d1 || (b.destination == Flow::kOne && b.minimal_m == m);
      d2 = d2 || (b.destination == Flow::kTwo && b.minimal_m == m);
    }
    c.expect(d1 && d2, "m=" + std::to_string(m) + " needs one minimal-m record per destination");
    const Rational outer = build_region(net, report).max_sum;
    c.expect(outer == R(2) - R(2, m + 1), "m=" + std::to_string(m) + " max_sum " + to_string(outer));
    const auto rep =
        monte_carlo(net, builtin_scheme(Family::kDoubleBottleneck, m), {.trials = kTrials, .seed = 1});
    c.expect(rep.decodable_d1 == kTrials && rep.decodable_d2 == kTrials, "m=" + std::to_string(m) + " decodability");
    c.expect(rep.achieved_dof == DofPoint{R(m, m + 1), R(m, m + 1)}, "m=" + std::to_string(m) + " achieved");
  }
}

void ac4(Checker& c) {
  const auto net = gen_no_bottleneck_example();
  const auto report = analyze(net);
  c.expect(report.bottlenecks.empty() && report.omniscient.empty(), "reports not empty");
  c.expect(testing::brute_bottlenecks(net).empty(), "oracle finds a bottleneck");
  c.expect(testing::brute_omniscient(net).empty(), "oracle finds an omniscient node");
  const auto rep = monte_carlo(net, builtin_scheme(Family::kNoBottleneck), {.trials = kTrials, .seed = 1});
  c.expect(rep.decodable_d1 == kTrials && rep.decodable_d2 == kTrials, "decodability");
  c.expect(rep.achieved_dof == DofPoint{R(1), R(1)}, "achieved");
}

void ac5(Checker& c) {
  for (int m = 1; m <= 10; ++m) {
    const auto single = in_set_S(R(2) - R(1, m));
    c.expect(single.member && single.k == 2 * m, "2 - 1/" + std::to_string(m));
    const auto dbl = in_set_S(R(2) - R(2, m + 1));
    c.expect(dbl.member && dbl.k == m + 1, "2 - 2/" + std::to_string(m + 1));
  }
  c.expect(!in_set_S(R(17, 10)).member, "17/10 accepted");
  c.expect(!in_set_S(R(19, 12)).member, "19/12 accepted");
}

struct Builtin {
  LayeredNetwork net;
  Scheme scheme;
  std::string label;
};

std::vector<Builtin> builtins() {
  std::vector<Builtin> out;
  for (int m = 1; m <= 6; ++m) {
    out.push_back({gen_bottleneck_family(m), builtin_scheme(Family::kBottleneck, m), "bottleneck(" + std::to_string(m) + ")"});
  }
  for (int m = 1; m <= 5; ++m) {
    out.push_back({gen_double_bottleneck_family(m), builtin_scheme(Family::kDoubleBottleneck, m),
                   "double-bottleneck(" + std::to_string(m) + ")"});
  }
  out.push_back({gen_no_bottleneck_example(), builtin_scheme(Family::kNoBottleneck), "no-bottleneck"});
  return out;
}

double self_consistency_error(const Builtin& b, const Mode& mode, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto real = ChannelRealization::draw(b.net, b.scheme, rng());
  const auto ledger = execute(b.net, b.scheme, real, mode);
  Eigen::VectorXd s(b.scheme.symbol_count());
  for (auto& x : s) x = normal(rng);
  Eigen::VectorXd z(ledger.noise_dim);
  for (auto& x : z) x = normal(rng);
  double worst = 0;
  for (const auto& [node, values] : evaluate_signals(b.net, b.scheme, real, ledger, s, z)) {
    for (std::size_t t = 0; t < values.size(); ++t) {
      const auto& sig = ledger.received(node, static_cast<int>(t + 1));
      const double tracked = sig.symbols.dot(s) + (ledger.noisy ? sig.noise.dot(z) : 0.0);
      worst = std::max(worst, std::abs(tracked - values[t]) / std::max(1.0, std::abs(tracked)));
    }
  }
  return worst;
}

void ac6(Checker& c) {
  std::mt19937_64 rng(20240601);

  // (a) cuts against path enumeration
  std::bernoulli_distribution pick(0.3);
  for (int n = 0; n < kCutNetworks; ++n) {
    const auto net = testing::random_layered(rng, 10, 5, 0.55, 4);
    for (int q = 0; q < 4; ++q) {
      NodeSet removed;
      for (const auto& v : net.ordered_nodes()) {
        if (pick(rng)) removed.insert(v);
      }
      const NodeSet from = q % 2 ? NodeSet{"s1", "s2"} : NodeSet{"s2"};
      const NodeSet to = q < 2 ? NodeSet{"d1", "d2"} : NodeSet{"d1"};
      c.expect(is_cut(net, {removed, from, to}) == testing::cut_by_paths(net, removed, from, to),
               "(a) is_cut disagrees on network " + std::to_string(n));
    }
  }

  // (b) minimal m against subset enumeration
  for (int n = 0; n < kBottleneckNetworks; ++n) {
    const auto net = testing::random_layered(rng, 22, 4, 0.6, 8);
    c.expect(detect_bottlenecks(net) == testing::brute_bottlenecks(net),
             "(b) bottlenecks disagree on network " + std::to_string(n));
    c.expect(detect_omniscient(net) == testing::brute_omniscient(net),
             "(b) omniscient disagree on network " + std::to_string(n));
  }

  // (c) genericity and (d) self-consistency
  for (const auto& b : builtins()) {
    const auto rep = monte_carlo(b.net, b.scheme, {.trials = kTrials, .seed = rng()});
    c.expect(rep.decodable_d1 >= kGenericityFloor && rep.decodable_d2 >= kGenericityFloor,
             "(c) " + b.label + " decodable " + std::to_string(rep.decodable_d1) + "/" +
                 std::to_string(rep.decodable_d2));
    for (const Mode& mode : {Mode{Noiseless{}}, Mode{Noisy{100.0}}}) {
      const double err = self_consistency_error(b, mode, rng);
      c.expect(err <= kSelfConsistencyTol, "(d) " + b.label + " " + describe(mode) + " error " + std::to_string(err));
    }
  }

  // (e) canned illegal schemes
  const auto net = gen_bottleneck_family(3);
  const std::vector<std::pair<std::string, Scheme>> illegal{
      {"instantaneous cross-node gain", testing::illegal_instantaneous_gain()},
      {"future gain", testing::illegal_future_gain()},
      {"never observes symbol", testing::illegal_missing_symbols()}};
  for (const auto& [reason, sch] : illegal) {
    const auto report = check_csit_legality(net, sch);
    bool found = false;
    for (const auto& v : report.violations) found = found || v.reason.find(reason) != std::string::npos;
    c.expect(!report.legal() && found, "(e) not rejected: " + reason);
  }
}

void ac7(Checker& c) {
  for (const auto& b : builtins()) {
    const auto rep = monte_carlo(b.net, b.scheme, {.trials = 10, .seed = 7});
    const Rational outer = region_of(b.net).max_sum;
    c.expect(rep.achieved_dof.has_value() && rep.achieved_dof->sum() == outer,
             b.label + " achieved " + (rep.achieved_dof ? str(*rep.achieved_dof) : "none") + " vs " + to_string(outer));
  }
}

struct Criterion {
  const char* id;
  const char* title;
  double limit;
  std::function<void(Checker&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {"AC1", "bottleneck(3) pipeline", kLimitAc1, ac1},
      {"AC2", "bottleneck family sweep m=1..6", kLimitAc2, ac2},
      {"AC3", "double-bottleneck sweep m=1..5", kLimitAc3, ac3},
      {"AC4", "no-bottleneck example", kLimitAc4, ac4},
      {"AC5", "set S coverage", kLimitAc5, ac5},
      {"AC6", "property suites", kLimitAc6, ac6},
      {"AC7", "inner bound meets outer bound", kLimitAc7, ac7},
  };
  int failed = 0;
  for (const auto& cr : all) {
    Checker c;
    const auto start = Clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (cr.limit > 0 && secs >= cr.limit) {
      std::ostringstream os;
      os << "runtime " << secs << " s over limit " << cr.limit << " s";
      c.failures.push_back(os.str());
    }
    const bool ok = c.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s %s: %s (%.3f s%s)\n", cr.id, ok ? "PASS" : "FAIL", cr.title, secs,
                cr.limit > 0 ? (", limit " + std::to_string(static_cast<int>(cr.limit)) + " s").c_str() : "");
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  }
  return failed == 0 ? 0 : 1;
}
