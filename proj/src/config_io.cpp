#include "qevap/config_io.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qevap/errors.hpp"

namespace qevap {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// %.16e round-trips IEEE doubles exactly through strtod.
std::string full(double v) { return fmt("%.16e", v); }

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for key " + key + ": '" + s + "'");
  }
}

long parse_long(const std::string& key, const std::string& s) {
  const double v = parse_double(key, s);
  const long l = std::lround(v);
  if (std::abs(v - static_cast<double>(l)) > 0.0)
    throw ConfigError("key " + key + " expects an integer, got '" + s + "'");
  return l;
}

const char* const known_keys[] = {
    "particle.mass_kg", "particle.hbar_Js",
    "grid.x_min_m", "grid.x_max_m", "grid.n_points",
    "potential.kind", "potential.v0_J", "potential.x0_m", "potential.x1_m",
    "potential.x_edge_m", "potential.ramp_width_m", "potential.drift_velocity_mps",
    "potential.drift_start_s",
    "packet.x_i_m", "packet.sigma_m", "packet.k_bar_per_m",
    "time.dt_s", "time.t_end_s",
    "measure.x_transmit_m", "record.every", "snapshot.times_s",
};

const char* const kick_fields[] = {"q_per_m", "t_k_s", "delta_t_s", "n_substeps"};

std::string stem_of(const std::string& key) {
  const auto us = key.rfind('_');
  return us == std::string::npos ? key : key.substr(0, us);
}

void reject_unknown(const std::string& key) {
  for (const char* k : known_keys)
    if (key == k) return;
  if (key.rfind("kick.", 0) == 0) {
    const auto second = key.find('.', 5);
    if (second != std::string::npos) {
      const std::string field = key.substr(second + 1);
      for (const char* f : kick_fields)
        if (field == f) return;
      for (const char* f : kick_fields)
        if (stem_of(field) == stem_of(f))
          throw ConfigError("unit-suffix mismatch for key " + key + " (expected " +
                            key.substr(0, second + 1) + f + ")");
    }
    throw ConfigError("unknown key: " + key);
  }
  for (const char* k : known_keys)
    if (stem_of(key) == stem_of(k))
      throw ConfigError("unit-suffix mismatch for key " + key + " (expected " +
                        std::string(k) + ")");
  throw ConfigError("unknown key: " + key);
}

} // namespace

KeyValues to_key_values(const SimConfig& c) {
  KeyValues kv;
  kv["particle.mass_kg"] = full(c.particle.mass);
  kv["particle.hbar_Js"] = full(c.particle.hbar);
  kv["grid.x_min_m"] = full(c.grid.x_min);
  kv["grid.x_max_m"] = full(c.grid.x_max);
  kv["grid.n_points"] = std::to_string(c.grid.n_points);
  kv["potential.kind"] = to_string(c.potential.kind);
  kv["potential.v0_J"] = full(c.potential.v0);
  kv["potential.x0_m"] = full(c.potential.x0);
  kv["potential.x1_m"] = full(c.potential.x1);
  kv["potential.x_edge_m"] = full(c.potential.x_edge);
  kv["potential.ramp_width_m"] = full(c.potential.ramp_width);
  kv["potential.drift_velocity_mps"] = full(c.potential.drift_velocity);
  kv["potential.drift_start_s"] = full(c.potential.drift_start);
  kv["packet.x_i_m"] = full(c.packet.x_i);
  kv["packet.sigma_m"] = full(c.packet.sigma);
  kv["packet.k_bar_per_m"] = full(c.packet.k_bar);
  kv["time.dt_s"] = full(c.dt);
  kv["time.t_end_s"] = full(c.t_end);
  kv["measure.x_transmit_m"] = full(c.x_transmit);
  kv["record.every"] = std::to_string(c.record_every);
  if (!c.snapshot_times.empty()) {
    std::string s;
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i)
      s += (i ? "," : "") + full(c.snapshot_times[i]);
    kv["snapshot.times_s"] = s;
  }
  for (std::size_t i = 0; i < c.kicks.size(); ++i) {
    const std::string p = "kick." + std::to_string(i) + ".";
    kv[p + "q_per_m"] = full(c.kicks[i].q);
    kv[p + "t_k_s"] = full(c.kicks[i].t_k);
    kv[p + "delta_t_s"] = full(c.kicks[i].delta_t);
    kv[p + "n_substeps"] = std::to_string(c.kicks[i].n_substeps);
  }
  return kv;
}

SimConfig config_from_key_values(const KeyValues& kv) {
  for (const auto& [key, value] : kv) reject_unknown(key);
  SimConfig c;
  auto get = [&kv](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto require = [&](const char* key) -> const std::string& {
    const std::string* v = get(key);
    if (!v) throw ConfigError(std::string("missing required key: ") + key);
    return *v;
  };

  c.particle.mass = parse_double("particle.mass_kg", require("particle.mass_kg"));
  if (const auto* v = get("particle.hbar_Js"))
    c.particle.hbar = parse_double("particle.hbar_Js", *v);
  c.grid = Grid1D(parse_double("grid.x_min_m", require("grid.x_min_m")),
                  parse_double("grid.x_max_m", require("grid.x_max_m")),
                  static_cast<std::size_t>(parse_long("grid.n_points",
                                                      require("grid.n_points"))));
  const std::string& kind = require("potential.kind");
  if (kind == "barrier") c.potential.kind = PotentialKind::barrier;
  else if (kind == "step") c.potential.kind = PotentialKind::step;
  else if (kind == "smoothed_step") c.potential.kind = PotentialKind::smoothed_step;
  else throw ConfigError("potential.kind: expected barrier|step|smoothed_step, got '" +
                         kind + "'");
  c.potential.v0 = parse_double("potential.v0_J", require("potential.v0_J"));
  if (const auto* v = get("potential.x0_m")) c.potential.x0 = parse_double("potential.x0_m", *v);
  if (const auto* v = get("potential.x1_m")) c.potential.x1 = parse_double("potential.x1_m", *v);
  if (const auto* v = get("potential.x_edge_m"))
    c.potential.x_edge = parse_double("potential.x_edge_m", *v);
  if (const auto* v = get("potential.ramp_width_m"))
    c.potential.ramp_width = parse_double("potential.ramp_width_m", *v);
  if (const auto* v = get("potential.drift_velocity_mps"))
    c.potential.drift_velocity = parse_double("potential.drift_velocity_mps", *v);
  if (const auto* v = get("potential.drift_start_s"))
    c.potential.drift_start = parse_double("potential.drift_start_s", *v);
  c.packet.x_i = parse_double("packet.x_i_m", require("packet.x_i_m"));
  c.packet.sigma = parse_double("packet.sigma_m", require("packet.sigma_m"));
  c.packet.k_bar = parse_double("packet.k_bar_per_m", require("packet.k_bar_per_m"));
  c.dt = parse_double("time.dt_s", require("time.dt_s"));
  c.t_end = parse_double("time.t_end_s", require("time.t_end_s"));
  c.x_transmit = parse_double("measure.x_transmit_m", require("measure.x_transmit_m"));
  if (const auto* v = get("record.every"))
    c.record_every = static_cast<int>(parse_long("record.every", *v));
  if (const auto* v = get("snapshot.times_s")) {
    std::stringstream ss(*v);
    std::string tok;
    while (std::getline(ss, tok, ','))
      c.snapshot_times.push_back(parse_double("snapshot.times_s", tok));
  }
  for (std::size_t i = 0;; ++i) {
    const std::string p = "kick." + std::to_string(i) + ".";
    const auto* q = get((p + "q_per_m").c_str());
    if (!q) break;
    KickEvent k;
    k.q = parse_double(p + "q_per_m", *q);
    k.t_k = parse_double(p + "t_k_s", require((p + "t_k_s").c_str()));
    if (const auto* v = get((p + "delta_t_s").c_str()))
      k.delta_t = parse_double(p + "delta_t_s", *v);
    if (const auto* v = get((p + "n_substeps").c_str()))
      k.n_substeps = static_cast<int>(parse_long(p + "n_substeps", *v));
    c.kicks.push_back(k);
  }
  return c;
}

SimConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return config_from_key_values(kv);
}

void write_config(const SimConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path.string());
  for (const auto& [key, value] : to_key_values(config))
    out << key << " = " << value << "\n";
}

std::string config_hash(const SimConfig& config) {
  std::string text;
  for (const auto& [key, value] : to_key_values(config)) text += key + "=" + value + ";";
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string format_si(double v) { return fmt("%.11e", v); }

void write_series(const SeriesDoc& doc, const std::filesystem::path& path,
                  const std::string& format) {
  if (format != "csv" && format != "jsonl")
    throw ConfigError("format: expected csv or jsonl, got '" + format + "'");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write series file: " + path.string());
  if (format == "csv") {
    for (const auto& m : doc.metadata) out << "# " << m << "\n";
    for (std::size_t i = 0; i < doc.columns.size(); ++i)
      out << (i ? "," : "") << doc.columns[i];
    out << "\n";
    for (const auto& row : doc.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << format_si(row[i]);
      out << "\n";
    }
  } else {
    out << "{\"meta\":{";
    for (std::size_t i = 0; i < doc.metadata.size(); ++i) {
      const auto& m = doc.metadata[i];
      const auto colon = m.find(':');
      const std::string key = colon == std::string::npos ? m : m.substr(0, colon);
      std::string val = colon == std::string::npos ? "" : m.substr(colon + 1);
      if (!val.empty() && val.front() == ' ') val.erase(0, 1);
      out << (i ? "," : "") << "\"" << key << "\":\"" << val << "\"";
    }
    out << "}}\n";
    for (const auto& row : doc.rows) {
      out << "{";
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << "\"" << doc.columns[i] << "\":" << format_si(row[i]);
      out << "}\n";
    }
  }
}

void write_manifest(const SimConfig& config, const std::filesystem::path& path,
                    const std::vector<std::string>& meta) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write manifest: " + path.string());
  out << "# " << tool_version << "\n";
  out << "# config_hash: " << config_hash(config) << "\n";
  for (const auto& m : meta) out << "# " << m << "\n";
  for (const auto& [key, value] : to_key_values(config))
    out << key << " = " << value << "\n";
}

} // namespace qevap
