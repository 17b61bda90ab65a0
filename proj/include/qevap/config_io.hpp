#ifndef QEVAP_CONFIG_IO_HPP
#define QEVAP_CONFIG_IO_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qevap/sim_config.hpp"

namespace qevap {

inline constexpr const char* tool_version = "qevap 0.1.0";

// Flat, human-editable key-value text: dotted section keys with SI unit
// suffixes (packet.sigma_m, time.dt_s, ...), '#' comments, one `key = value`
// per line. Kicks use indexed sections kick.0.q_per_m etc.
using KeyValues = std::map<std::string, std::string>;

KeyValues to_key_values(const SimConfig& config);
SimConfig config_from_key_values(const KeyValues& kv);  // rejects unknown keys

SimConfig read_config(const std::filesystem::path& path);
void write_config(const SimConfig& config, const std::filesystem::path& path);

// FNV-1a of the serialized resolved configuration; stamped into outputs.
std::string config_hash(const SimConfig& config);

// Series output: '#'-prefixed metadata lines (tool version, config hash, ...),
// a header row, then rows in decimal scientific notation with 12 significant
// digits. format is "csv" or "jsonl".
struct SeriesDoc {
  std::vector<std::string> metadata;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
void write_series(const SeriesDoc& doc, const std::filesystem::path& path,
                  const std::string& format);

// Full resolved configuration plus run metadata as comments; reading it back
// through read_config reproduces the run bit-identically within one build.
void write_manifest(const SimConfig& config, const std::filesystem::path& path,
                    const std::vector<std::string>& meta);

std::string format_si(double v);  // 12 significant digits, scientific

} // namespace qevap

#endif
