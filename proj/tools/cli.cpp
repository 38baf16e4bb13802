#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dofnet/cuts.hpp"
#include "dofnet/dof.hpp"
#include "dofnet/error.hpp"
#include "dofnet/network.hpp"
#include "dofnet/scheme.hpp"
#include "dofnet/sim.hpp"

namespace dofnet::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kMaxInferredM = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw ValidationError("cannot write \"" + path + "\"");
}

struct NetworkSource {
  std::string path;
  std::string family;
  int m = 0;
};

void add_network_source(CLI::App* cmd, NetworkSource& src, const std::string& m_help) {
  cmd->add_option("network", src.path, "Network JSON file");
  cmd->add_option("--family", src.family, "Generate the network instead: bottleneck | double-bottleneck | no-bottleneck");
  cmd->add_option("--m", src.m, m_help)->check(CLI::PositiveNumber);
}

LayeredNetwork load_network(const NetworkSource& src) {
  if (src.path.empty() == src.family.empty()) {
    throw ValidationError("give exactly one network source: a JSON file or --family");
  }
  if (!src.path.empty()) return parse_network(read_file(src.path));
  return generate(parse_family(src.family), src.m > 0 ? src.m : 1);
}

std::string join(const NodeSet& s) {
  std::string out = "{";
  for (const auto& n : s) out += (out.size() > 1 ? ", " : "") + n;
  return out + "}";
}

std::string dest(Flow f) { return "d" + std::to_string(Index(f)); }

// (2/3,1): the compact pair form used in simulation summaries.
std::string pair(const DofPoint& p) { return "(" + to_string(p.d1) + "," + to_string(p.d2) + ")"; }

std::string human_report(const BottleneckReport& r) {
  std::string b;
  for (const auto& rec : r.bottlenecks) {
    b += (b.empty() ? "" : ", ") + rec.node + " (" + dest(rec.destination) + ", m=" +
         std::to_string(rec.minimal_m) + ", witness " + join(rec.witness) + ")";
  }
  std::string o;
  for (const auto& rec : r.omniscient) {
    o += (o.empty() ? "" : ", ") + rec.node + " (" + dest(rec.destination) + ", via " + rec.witness_u + ")";
  }
  return "bottlenecks: " + (b.empty() ? "none" : b) + "; omniscient: " + (o.empty() ? "none" : o) + "\n";
}

std::string human_set_s(const Rational& x) {
  const SetMembership s = in_set_S(x);
  if (!s.member) return "no";
  return s.k ? "yes, k=" + std::to_string(*s.k) : "yes (the value 2)";
}

std::string human_region(const DofRegion& region) {
  std::ostringstream os;
  os << "constraints:\n";
  for (const auto& c : region.constraints) os << "  " << describe(c) << "  [" << describe(c.provenance) << "]\n";
  os << "vertices:";
  for (const auto& v : region.vertices) os << ' ' << describe(v);
  os << "\nmax_sum: " << to_string(region.max_sum) << " at " << describe(region.argmax_vertex) << '\n';
  os << "in S: " << human_set_s(region.max_sum) << '\n';
  return os.str();
}

struct SchemeSource {
  std::string spec;
  int m = 0;
};

// Parses "name" or "name(M)".
std::pair<std::string, int> split_builtin(const std::string& spec) {
  const auto open = spec.find('(');
  if (open == std::string::npos) return {spec, 0};
  if (spec.back() != ')') throw ValidationError("malformed scheme name \"" + spec + "\"");
  const std::string inner = spec.substr(open + 1, spec.size() - open - 2);
  try {
    std::size_t used = 0;
    const int m = std::stoi(inner, &used);
    if (used != inner.size() || m < 1) throw std::invalid_argument(inner);
    return {spec.substr(0, open), m};
  } catch (const std::exception&) {
    throw ValidationError("malformed scheme name \"" + spec + "\"");
  }
}

bool looks_like_file(const std::string& spec) {
  return spec.find('/') != std::string::npos || spec.ends_with(".json") || std::ifstream(spec).good();
}

// A scheme file is used as given; a builtin must match the network's family,
// with m taken from the flag, the name, or inferred by regenerating.
Scheme load_scheme(const SchemeSource& src, const LayeredNetwork& net) {
  if (looks_like_file(src.spec)) return parse_scheme(read_file(src.spec));
  auto [name, m] = split_builtin(src.spec);
  if (name == "fig3") name = "bottleneck";
  const Family family = parse_family(name);
  if (m == 0) m = src.m;
  if (m == 0 && family == Family::kNoBottleneck) m = 1;
  if (m == 0) {
    for (int c = 1; c <= kMaxInferredM && m == 0; ++c) {
      if (generate(family, c) == net) m = c;
    }
    if (m == 0) {
      throw ValidationError("scheme \"" + src.spec + "\" is not compatible with this network (no " +
                            std::string(family_name(family)) + " network with m <= " +
                            std::to_string(kMaxInferredM) + " matches)");
    }
  } else if (!(generate(family, m) == net)) {
    throw ValidationError("scheme \"" + src.spec + "\" with m=" + std::to_string(m) +
                          " is not compatible with this network");
  }
  return builtin_scheme(family, m);
}

std::string json_legality(const LegalityReport& r) {
  ojson doc;
  doc["legal"] = r.legal();
  auto list = ojson::array();
  for (const auto& v : r.violations) {
    ojson j;
    j["node"] = v.node;
    j["hop"] = v.hop;
    j["slot"] = v.slot;
    if (v.gain) {
      j["gain"]["edge"] = {v.gain->edge.from, v.gain->edge.to};
      j["gain"]["slot"] = v.gain->slot;
    }
    j["reason"] = v.reason;
    list.push_back(std::move(j));
  }
  doc["violations"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string human_legality(const LegalityReport& r) {
  std::ostringstream os;
  if (r.legal()) {
    os << "legal: yes\n";
    return os.str();
  }
  os << "legal: no (" << r.violations.size() << " violation" << (r.violations.size() == 1 ? "" : "s") << ")\n";
  for (const auto& v : r.violations) {
    os << "  hop " << v.hop << ", slot " << v.slot << ", node \"" << v.node << "\": " << v.reason << '\n';
  }
  return os.str();
}

std::string human_simulation(const SimulationReport& r, const Rational& outer, bool matches) {
  std::ostringstream os;
  os << "seed: " << r.seed << '\n';
  os << "trials: " << r.trials << " (" << r.mode << ", tol " << r.tol << ")\n";
  os << "decodable: d1 " << r.decodable_d1 << '/' << r.trials << ", d2 " << r.decodable_d2 << '/' << r.trials
     << '\n';
  os << "declared " << pair(r.declared_dof) << '\n';
  os << "outer bound max_sum " << to_string(outer) << '\n';
  os << "achieved " << (r.achieved_dof ? pair(*r.achieved_dof) : "none")
     << "; matches outer bound: " << (matches ? "yes" : "no") << '\n';
  return os.str();
}

const std::vector<std::string> kFormats{"human", "json"};
const std::vector<std::string> kSimFormats{"human", "json", "csv"};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bottleneck analysis, DoF outer bounds and delayed-CSIT scheme simulation for two-unicast "
               "layered networks.",
               "dofnet"};
  app.require_subcommand(1);

  // gen
  std::string gen_family;
  int gen_m = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a generated network as JSON");
  gen->add_option("--family", gen_family, "bottleneck | double-bottleneck | no-bottleneck")->required();
  gen->add_option("--m", gen_m, "Family parameter (no-bottleneck takes none)")->check(CLI::PositiveNumber);
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

  // scheme
  std::string sch_family;
  int sch_m = 1;
  std::string sch_out;
  auto* scheme = app.add_subcommand("scheme", "Write a built-in scheme as JSON");
  scheme->add_option("--family", sch_family, "bottleneck | double-bottleneck | no-bottleneck")->required();
  scheme->add_option("--m", sch_m, "Family parameter")->check(CLI::PositiveNumber);
  scheme->add_option("-o,--output", sch_out, "Output file (default stdout)");

  // analyze
  NetworkSource an_src;
  std::string an_format = "human";
  int an_budget = kDefaultIndegreeBudget;
  auto* analyze_cmd = app.add_subcommand("analyze", "Report bottleneck and omniscient nodes");
  add_network_source(analyze_cmd, an_src, "Family parameter for --family");
  analyze_cmd->add_option("--format", an_format, "human | json")->check(CLI::IsMember(kFormats));
  analyze_cmd->add_option("--budget", an_budget, "Largest parent set searched exhaustively");

  // region
  NetworkSource rg_src;
  std::string rg_format = "human";
  auto* region_cmd = app.add_subcommand("region", "Compute the DoF outer-bound region");
  add_network_source(region_cmd, rg_src, "Family parameter for --family");
  region_cmd->add_option("--format", rg_format, "human | json")->check(CLI::IsMember(kFormats));

  // simulate
  NetworkSource sm_src;
  SchemeSource sm_scheme;
  MonteCarloConfig mc;
  std::string sm_mode = "noiseless";
  double sm_power = 100.0;
  std::string sm_format = "human";
  auto* simulate = app.add_subcommand(
      "simulate",
      "Run a scheme over random channel realizations.\n"
      "CSV columns: trial,seed,d1_decodable,d2_decodable,d1_min_sv,d2_min_sv,d1_mse,d2_mse\n"
      "(min_sv: smallest own-symbol singular value after interference projection, relative to the largest;\n"
      " mse: zero-forcing error per symbol, noisy mode only)");
  add_network_source(simulate, sm_src, "Family parameter, for --family and builtin schemes");
  simulate->add_option("--scheme", sm_scheme.spec, "Built-in name (bottleneck, double-bottleneck, no-bottleneck, "
                                                   "optionally name(M)) or a scheme JSON file")
      ->required();
  simulate->add_option("--trials", mc.trials, "Number of channel realizations")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", mc.seed, "Master seed")->envname(kSeedEnv);
  simulate->add_option("--mode", sm_mode, "noiseless | noisy")->check(CLI::IsMember({"noiseless", "noisy"}));
  simulate->add_option("--power", sm_power, "Transmit power P in noisy mode")->check(CLI::PositiveNumber);
  simulate->add_option("--tol", mc.tol, "Relative singular-value threshold for rank decisions");
  simulate->add_option("--threads", mc.threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--format", sm_format, "human | json | csv")->check(CLI::IsMember(kSimFormats));

  // check-scheme
  std::string ck_scheme;
  std::string ck_net;
  int ck_delay = 1;
  std::string ck_format = "human";
  auto* check = app.add_subcommand("check-scheme", "Check a scheme against the delayed-CSIT rules");
  check->add_option("scheme", ck_scheme, "Scheme JSON file")->required();
  check->add_option("network", ck_net, "Network JSON file")->required();
  check->add_option("--delay", ck_delay, "CSIT feedback delay in slots")->check(CLI::PositiveNumber);
  check->add_option("--format", ck_format, "human | json")->check(CLI::IsMember(kFormats));

  std::vector<const char*> argv{"dofnet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidationError;
  }

  try {
    if (*gen) {
      const Family f = parse_family(gen_family);
      emit(gen_out, serialize_network(generate(f, gen_m)), out);
    } else if (*scheme) {
      emit(sch_out, serialize_scheme(builtin_scheme(parse_family(sch_family), sch_m)), out);
    } else if (*analyze_cmd) {
      const BottleneckReport report = analyze(load_network(an_src), an_budget);
      out << (an_format == "json" ? serialize_report(report) : human_report(report));
    } else if (*region_cmd) {
      const LayeredNetwork net = load_network(rg_src);
      const DofRegion region = build_region(net, analyze(net));
      out << (rg_format == "json" ? serialize_region(region) : human_region(region));
    } else if (*simulate) {
      const LayeredNetwork net = load_network(sm_src);
      sm_scheme.m = sm_src.m;
      const Scheme sch = load_scheme(sm_scheme, net);
      if (sm_mode == "noisy") mc.mode = Noisy{sm_power};
      const SimulationReport report = monte_carlo(net, sch, mc);
      const Rational outer = max_sum_dof(build_region(net, analyze(net)));
      const bool matches = report.achieved_dof && report.achieved_dof->sum() == outer;
      if (sm_format == "csv") {
        err << "seed: " << report.seed << '\n';
        out << simulation_csv(report);
      } else if (sm_format == "json") {
        ojson doc = ojson::parse(serialize_simulation_report(report));
        doc["outer_bound_max_sum"] = to_string(outer);
        doc["matches_outer_bound"] = matches;
        out << doc.dump(2) << '\n';
      } else {
        out << human_simulation(report, outer, matches);
      }
    } else if (*check) {
      const LayeredNetwork net = parse_network(read_file(ck_net));
      const Scheme sch = parse_scheme(read_file(ck_scheme));
      const LegalityReport report = check_csit_legality(net, sch, {ck_delay});
      out << (ck_format == "json" ? json_legality(report) : human_legality(report));
      return report.legal() ? kOk : kValidationError;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const TrialFailure& e) {
    err << "error: " << e.what() << " (replay with trial seed " << e.trial_seed() << ")\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}

}  // namespace dofnet::cli
