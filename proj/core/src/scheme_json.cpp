#include <json.hpp>

#include "dofnet/error.hpp"
#include "dofnet/scheme.hpp"

namespace dofnet {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& what) {
  throw ValidationError("scheme schema violation: " + what);
}

bool is_unit(const Coefficient& c) { return c.value == 1.0 && c.gains.empty(); }

ojson to_json(const Coefficient& c) {
  if (c.gains.empty()) return c.value;
  ojson j;
  j["value"] = c.value;
  auto gains = ojson::array();
  for (const auto& g : c.gains) {
    ojson gj;
    gj["edge"] = {g.edge.from, g.edge.to};
    gj["slot"] = g.slot;
    gains.push_back(std::move(gj));
  }
  j["gains"] = std::move(gains);
  return j;
}

ojson to_json(const TransmitSpec& spec) {
  ojson j;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Silent>) {
          j["kind"] = "silent";
        } else if constexpr (std::is_same_v<T, SendSymbol>) {
          j["kind"] = "symbol";
          j["symbol"] = to_string(s.symbol);
          if (!is_unit(s.scale)) j["scale"] = to_json(s.scale);
        } else if constexpr (std::is_same_v<T, ReplayReceived>) {
          j["kind"] = "replay";
          j["slot"] = s.slot;
          if (!is_unit(s.scale)) j["scale"] = to_json(s.scale);
        } else if constexpr (std::is_same_v<T, SendReconstruction>) {
          j["kind"] = "reconstruct";
          auto target = ojson::array();
          for (const auto& t : s.target) {
            ojson tj;
            tj["symbol"] = to_string(t.symbol);
            tj["coef"] = to_json(t.coefficient);
            target.push_back(std::move(tj));
          }
          j["target"] = std::move(target);
          if (!is_unit(s.scale)) j["scale"] = to_json(s.scale);
        } else {
          j["kind"] = "combo";
          auto terms = ojson::array();
          for (const auto& t : s.terms) {
            ojson tj;
            tj["weight"] = t.weight;
            tj["spec"] = to_json(t.spec);
            terms.push_back(std::move(tj));
          }
          j["terms"] = std::move(terms);
        }
      },
      spec.kind);
  return j;
}

const ojson& field(const ojson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing key \"") + key + "\" in " + j.dump());
  return j.at(key);
}

int int_field(const ojson& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) schema_error(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

std::string string_field(const ojson& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) schema_error(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

Coefficient coefficient_from(const ojson& j) {
  if (j.is_number()) return {j.get<double>(), {}};
  if (!j.is_object()) schema_error("coefficient must be a number or {value, gains}");
  Coefficient c;
  if (j.contains("value")) {
    if (!j["value"].is_number()) schema_error("coefficient value must be a number");
    c.value = j["value"].get<double>();
  }
  if (j.contains("gains")) {
    if (!j["gains"].is_array()) schema_error("\"gains\" must be an array");
    for (const auto& g : j["gains"]) {
      const auto& e = field(g, "edge");
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        schema_error("gain edge must be a 2-element string array");
      }
      c.gains.push_back({{e[0].get<std::string>(), e[1].get<std::string>()}, int_field(g, "slot")});
    }
  }
  return c;
}

Coefficient optional_scale(const ojson& j) {
  return j.contains("scale") ? coefficient_from(j["scale"]) : Coefficient{};
}

TransmitSpec spec_from(const ojson& j) {
  const std::string kind = string_field(j, "kind");
  if (kind == "silent") return {Silent{}};
  if (kind == "symbol") return {SendSymbol{parse_symbol(string_field(j, "symbol")), optional_scale(j)}};
  if (kind == "replay") return {ReplayReceived{int_field(j, "slot"), optional_scale(j)}};
  if (kind == "reconstruct") {
    SendReconstruction r;
    const auto& target = field(j, "target");
    if (!target.is_array()) schema_error("\"target\" must be an array");
    for (const auto& t : target) {
      r.target.push_back({t.contains("coef") ? coefficient_from(t["coef"]) : Coefficient{},
                          parse_symbol(string_field(t, "symbol"))});
    }
    r.scale = optional_scale(j);
    return {std::move(r)};
  }
  if (kind == "combo") {
    LinearCombo c;
    const auto& terms = field(j, "terms");
    if (!terms.is_array()) schema_error("\"terms\" must be an array");
    for (const auto& t : terms) {
      const auto& w = field(t, "weight");
      if (!w.is_number()) schema_error("combo weight must be a number");
      c.terms.push_back({w.get<double>(), spec_from(field(t, "spec"))});
    }
    return {std::move(c)};
  }
  schema_error("unknown spec kind \"" + kind + "\"");
}

}  // namespace

std::string serialize_scheme(const Scheme& sch) {
  ojson doc;
  doc["family"] = sch.family;
  doc["m"] = sch.m;
  auto hops = ojson::array();
  for (const auto& h : sch.hops) {
    ojson hj;
    hj["T"] = h.slots;
    ojson schedule = ojson::object();
    for (const auto& [key, spec] : h.schedule) {
      schedule[std::to_string(key.first) + "," + key.second] = to_json(spec);
    }
    hj["schedule"] = std::move(schedule);
    hops.push_back(std::move(hj));
  }
  doc["hops"] = std::move(hops);
  doc["symbols"]["k1"] = sch.k1;
  doc["symbols"]["k2"] = sch.k2;
  return doc.dump(2) + "\n";
}

Scheme parse_scheme(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("top-level value must be an object");
  Scheme sch;
  sch.family = doc.contains("family") ? string_field(doc, "family") : "custom";
  sch.m = doc.contains("m") ? int_field(doc, "m") : 1;
  const auto& symbols = field(doc, "symbols");
  sch.k1 = int_field(symbols, "k1");
  sch.k2 = int_field(symbols, "k2");
  const auto& hops = field(doc, "hops");
  if (!hops.is_array()) schema_error("\"hops\" must be an array");
  for (const auto& hj : hops) {
    HopBlock block;
    block.slots = int_field(hj, "T");
    const auto& schedule = field(hj, "schedule");
    if (!schedule.is_object()) schema_error("\"schedule\" must be an object");
    for (const auto& [key, spec] : schedule.items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos || comma == 0 || comma + 1 == key.size()) {
        schema_error("schedule key \"" + key + "\" must be \"slot,node\"");
      }
      int slot = 0;
      try {
        std::size_t used = 0;
        slot = std::stoi(key.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        schema_error("schedule key \"" + key + "\" has a non-integer slot");
      }
      block.schedule[{slot, key.substr(comma + 1)}] = spec_from(spec);
    }
    sch.hops.push_back(std::move(block));
  }
  return sch;
}

}  // namespace dofnet
