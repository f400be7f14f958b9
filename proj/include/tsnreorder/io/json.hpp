#pragma once

// JSON encodings. Every numeric value is written as an exact decimal (or
// "p/q") string; on input, strings and plain JSON numbers are both accepted.

#include "tsnreorder/path_analysis.hpp"

#include <json.hpp>

#include <string>

namespace tsnreorder::io {

using json = nlohmann::ordered_json;

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string where(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline Rat number(const json& v, const std::string& path, bool time) {
  try {
    if (v.is_string()) return time ? parse_time(v.get<std::string>()) : parse_rat(v.get<std::string>());
    if (v.is_number_integer()) return parse_rat(v.dump());
    if (v.is_number_float()) return parse_rat(v.dump());
  } catch (const ParseError& e) {
    throw SchemaError(path + ": " + e.what());
  }
  throw SchemaError(path + ": expected a number or a numeric string");
}

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError((path.empty() ? "document" : path) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where(path, key) + ": missing");
  return *it;
}

inline Rat rat_field(const json& obj, const std::string& key, const std::string& path) {
  return number(field(obj, key, path), where(path, key), false);
}

inline Rat time_field(const json& obj, const std::string& key, const std::string& path) {
  return number(field(obj, key, path), where(path, key), true);
}

inline std::optional<Rat> opt_rat(const json& obj, const std::string& key, const std::string& path, bool time) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return number(*it, where(path, key), time);
}

inline std::string string_field(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaError(where(path, key) + ": expected a string");
  return v.get<std::string>();
}

}  // namespace detail

inline json rat_json(const Rat& r) { return to_string(r); }

// ---- curves -------------------------------------------------------------

inline json to_json(const Curve& c) {
  json j;
  j["unit"] = to_string(c.unit());
  if (c.is_staircase()) {
    j["kind"] = "staircase";
    j["burst"] = rat_json(c.stair_burst());
    j["period"] = rat_json(c.period());
    return j;
  }
  j["kind"] = "min_affine";
  json pieces = json::array();
  for (const auto& p : c.pieces()) pieces.push_back({{"rate", rat_json(p.rate)}, {"burst", rat_json(p.burst)}});
  j["pieces"] = std::move(pieces);
  return j;
}

inline Curve curve_from_json(const json& j, const std::string& path = "curve", Unit default_unit = Unit::bytes) {
  using namespace detail;
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  Unit unit = default_unit;
  if (auto it = j.find("unit"); it != j.end()) {
    std::string u = it->is_string() ? it->get<std::string>() : "";
    if (u == "bytes") {
      unit = Unit::bytes;
    } else if (u == "packets") {
      unit = Unit::packets;
    } else {
      throw SchemaError(path + ".unit: expected \"bytes\" or \"packets\"");
    }
  }
  std::string kind = j.contains("kind") ? string_field(j, "kind", path) : "min_affine";
  try {
    if (kind == "staircase") {
      if (!j.contains("unit")) unit = Unit::packets;
      return Curve::staircase(rat_field(j, "burst", path), time_field(j, "period", path), unit);
    }
    if (kind != "min_affine") throw SchemaError(path + ".kind: unknown curve kind '" + kind + "'");
    const json& arr = field(j, "pieces", path);
    if (!arr.is_array()) throw SchemaError(path + ".pieces: expected an array");
    std::vector<AffinePiece> pieces;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string p = path + ".pieces[" + std::to_string(i) + "]";
      pieces.push_back({rat_field(arr[i], "rate", p), rat_field(arr[i], "burst", p)});
    }
    return Curve::min_affine(std::move(pieces), unit);
  } catch (const CurveError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

// ---- flows and paths ----------------------------------------------------

inline json to_json(const FlowSpec& f) {
  json j;
  j["curve"] = to_json(f.source_curve);
  if (f.packet_curve) j["packet_curve"] = to_json(*f.packet_curve);
  j["l_min"] = rat_json(f.l_min);
  j["l_max"] = rat_json(f.l_max);
  return j;
}

inline FlowSpec flow_from_json(const json& j, const std::string& path = "flow") {
  using namespace detail;
  Curve c = curve_from_json(field(j, "curve", path), where(path, "curve"));
  std::optional<Curve> pc;
  if (j.contains("packet_curve")) pc = curve_from_json(j["packet_curve"], where(path, "packet_curve"), Unit::packets);
  try {
    return make_flow(std::move(c), rat_field(j, "l_min", path), rat_field(j, "l_max", path), std::move(pc));
  } catch (const CurveError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

inline LossMode loss_mode_from_string(const std::string& s, const std::string& path) {
  if (s == "lossless") return LossMode::lossless;
  if (s == "lossy") return LossMode::lossy;
  throw SchemaError(path + ": expected \"lossless\" or \"lossy\"");
}

inline json to_json(const ElementSpec& e) {
  json j;
  j["id"] = e.id;
  j["kind"] = to_string(e.kind);
  switch (e.kind) {
    case ElementKind::fifo_service:
      j["rate_Bps"] = rat_json(e.service->rate);
      j["latency_s"] = rat_json(e.service->latency);
      if (e.min_delay) j["min_delay_s"] = rat_json(*e.min_delay);
      if (e.line_rate) j["line_rate_Bps"] = rat_json(*e.line_rate);
      break;
    case ElementKind::fabric:
    case ElementKind::order_preserving_fixed:
      j["d_min_s"] = rat_json(e.d_min);
      j["d_max_s"] = rat_json(e.d_max);
      if (e.rto) j["rto_s"] = rat_json(*e.rto);
      break;
    case ElementKind::resequencer:
      j["mode"] = e.timeout ? "explicit" : "auto";
      if (e.timeout) j["timeout_s"] = rat_json(*e.timeout);
      if (e.buffer) j["buffer_bytes"] = rat_json(*e.buffer);
      break;
  }
  return j;
}

inline ElementSpec element_from_json(const json& j, const std::string& path) {
  using namespace detail;
  ElementSpec e;
  e.id = string_field(j, "id", path);
  std::string kind = string_field(j, "kind", path);
  if (kind == "fifo_service") {
    e.kind = ElementKind::fifo_service;
    try {
      e.service = RateLatencyService(rat_field(j, "rate_Bps", path), time_field(j, "latency_s", path));
    } catch (const CurveError& err) {
      throw SchemaError(path + ": " + err.what());
    }
    e.min_delay = opt_rat(j, "min_delay_s", path, true);
    e.line_rate = opt_rat(j, "line_rate_Bps", path, false);
  } else if (kind == "fabric" || kind == "order_preserving_fixed") {
    e.kind = kind == "fabric" ? ElementKind::fabric : ElementKind::order_preserving_fixed;
    e.d_min = time_field(j, "d_min_s", path);
    e.d_max = time_field(j, "d_max_s", path);
    e.rto = opt_rat(j, "rto_s", path, true);
  } else if (kind == "resequencer") {
    e.kind = ElementKind::resequencer;
    std::string mode = j.contains("mode") ? string_field(j, "mode", path) : "auto";
    if (mode == "explicit") {
      e.timeout = time_field(j, "timeout_s", path);
    } else if (mode != "auto") {
      throw SchemaError(where(path, "mode") + ": expected \"auto\" or \"explicit\"");
    }
    e.buffer = opt_rat(j, "buffer_bytes", path, false);
  } else {
    throw SchemaError(where(path, "kind") + ": unknown element kind '" + kind + "'");
  }
  return e;
}

inline json to_json(const PathSpec& p) {
  json j;
  j["flow"] = to_json(p.flow);
  j["loss_mode"] = to_string(p.loss_mode);
  json els = json::array();
  for (const auto& e : p.elements) els.push_back(to_json(e));
  j["elements"] = std::move(els);
  return j;
}

inline PathSpec path_from_json(const json& j) {
  using namespace detail;
  if (!j.is_object()) throw SchemaError("document: expected an object");
  PathSpec p{flow_from_json(field(j, "flow", "")), {}, LossMode::lossless};
  if (j.contains("loss_mode")) p.loss_mode = loss_mode_from_string(string_field(j, "loss_mode", ""), "loss_mode");
  const json& els = field(j, "elements", "");
  if (!els.is_array()) throw SchemaError("elements: expected an array");
  for (std::size_t i = 0; i < els.size(); ++i) {
    p.elements.push_back(element_from_json(els[i], "elements[" + std::to_string(i) + "]"));
  }
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return p;
}

/// Optional "placements": [{"name": ..., "sites": [{"after": <element id>, "id": <buffer id>}]}].
inline std::vector<Placement> placements_from_json(const json& j) {
  using namespace detail;
  std::vector<Placement> out;
  auto it = j.find("placements");
  if (it == j.end()) return out;
  if (!it->is_array()) throw SchemaError("placements: expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    std::string path = "placements[" + std::to_string(i) + "]";
    const json& pj = (*it)[i];
    Placement pl;
    pl.name = string_field(pj, "name", path);
    const json& sites = field(pj, "sites", path);
    if (!sites.is_array()) throw SchemaError(path + ".sites: expected an array");
    for (std::size_t k = 0; k < sites.size(); ++k) {
      std::string sp = path + ".sites[" + std::to_string(k) + "]";
      pl.sites.push_back({string_field(sites[k], "after", sp), string_field(sites[k], "id", sp)});
    }
    out.push_back(std::move(pl));
  }
  return out;
}

// ---- reports ------------------------------------------------------------

inline json to_json(const AnalysisReport& r) {
  json j;
  j["loss_mode"] = to_string(r.loss_mode);
  json els = json::array();
  for (const auto& e : r.elements) {
    json ej{{"id", e.id},
            {"kind", to_string(e.kind)},
            {"d_min_s", rat_json(e.d_min)},
            {"d_max_s", rat_json(e.d_max)},
            {"jitter_s", rat_json(e.jitter)}};
    if (e.rto) ej["rto_s"] = rat_json(*e.rto);
    els.push_back(std::move(ej));
  }
  j["elements"] = std::move(els);
  json rs = json::array();
  for (const auto& x : r.resequencers) {
    json rj{{"id", x.id},
            {"mode", x.auto_timeout ? "auto" : "explicit"},
            {"upstream_rto_s", rat_json(x.upstream_rto)},
            {"timeout_s", rat_json(x.timeout)},
            {"rbo_bound_bytes", rat_json(x.rbo_bound)},
            {"upstream_jitter_s", rat_json(x.upstream_jitter)},
            {"buffer_bound_bytes", rat_json(x.buffer_bound)},
            {"buffer_bytes", rat_json(x.buffer)},
            {"head_clamped", x.head_clamped},
            {"unsafe", x.unsafe}};
    if (x.head_element) rj["head_element"] = r.elements[*x.head_element].id;
    if (x.configured_buffer) rj["configured_buffer_bytes"] = rat_json(*x.configured_buffer);
    rs.push_back(std::move(rj));
  }
  j["resequencers"] = std::move(rs);
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"point", p.label}, {"curve", to_json(p.curve)}});
  j["points"] = std::move(pts);
  j["e2e"] = {{"delay_s", rat_json(r.e2e_delay)},
              {"min_delay_s", rat_json(r.e2e_min_delay)},
              {"jitter_s", rat_json(r.e2e_jitter)}};
  j["baseline"] = {{"delay_s", rat_json(r.baseline_delay)}, {"jitter_s", rat_json(r.baseline_jitter)}};
  j["delta"] = {{"delay_s", rat_json(r.delta_delay)}, {"jitter_s", rat_json(r.delta_jitter)}};
  j["warnings"] = r.warnings;
  return j;
}

inline json to_json(const ResequencerOutcome& o) {
  json j;
  json dep = json::object();
  for (const auto& [i, d] : o.departures) dep[std::to_string(i)] = rat_json(d);
  j["departures"] = std::move(dep);
  json dis = json::object();
  for (const auto& [i, why] : o.discards) dis[std::to_string(i)] = to_string(why);
  j["discards"] = std::move(dis);
  j["max_occupancy_bytes"] = rat_json(o.max_occupancy);
  j["max_residence_s"] = rat_json(o.max_residence);
  return j;
}

}  // namespace tsnreorder::io
