#include <cmath>
#include <random>

#include "dofnet/error.hpp"
#include "dofnet/sim.hpp"

namespace dofnet {

namespace {

std::uint32_t lo(std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); }
std::uint32_t hi(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

}  // namespace

double draw_gain(std::uint64_t seed, std::size_t edge_index, int slot) {
  std::seed_seq seq{lo(seed), hi(seed), static_cast<std::uint32_t>(edge_index),
                    static_cast<std::uint32_t>(slot)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  double h = normal(rng);
  while (std::abs(h) < kMinGainMagnitude) h = normal(rng);
  return h;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{lo(seed), hi(seed), lo(trial), hi(trial)};
  std::mt19937_64 rng(seq);
  return rng();
}

ChannelRealization ChannelRealization::draw(const LayeredNetwork& net, const Scheme& sch,
                                            std::uint64_t seed) {
  if (sch.hops.size() + 1 != net.layer_count()) {
    throw ValidationError("scheme hop count does not match the network");
  }
  ChannelRealization real(seed);
  for (const auto& e : net.edges()) {
    const int hop = net.layer_of(e.from);
    const std::size_t index = *net.edge_index(e.from, e.to);
    for (int t = 1; t <= sch.hops[static_cast<std::size_t>(hop)].slots; ++t) {
      real.set(e, t, draw_gain(seed, index, t));
    }
  }
  return real;
}

double ChannelRealization::gain(const Edge& e, int slot) const {
  auto it = gains_.find({e, slot});
  if (it == gains_.end()) {
    throw MissingGain("missing channel gain h_{" + e.from + "," + e.to + "}[" + std::to_string(slot) + "]");
  }
  return it->second;
}

}  // namespace dofnet
