#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualsrc/cost.hpp"
#include "dualsrc/dp.hpp"
#include "dualsrc/sim.hpp"

namespace dualsrc {

inline constexpr const char* tool_version = "0.1.0";

// --- canonical serialization -------------------------------------------------
// Sorted keys (nlohmann's default object ordering), every floating-point
// number rendered with 17 significant digits, 2-space indent, LF endings.
// canonical(canonical(x)) is byte-identical, which makes goldens and content
// hashes stable.
std::string canonical_dump(const nlohmann::json& j);
std::string format_double(double v);

// FNV-1a over the canonical bytes, as a 16-digit hex string.
std::string content_hash(const nlohmann::json& j);

// --- instance / demand / policy JSON ------------------------------------------
nlohmann::json demand_to_json(const DemandDistribution& d);
DemandDistribution demand_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
Instance load_instance(const std::string& path);

PolicySpec policy_from_json(const nlohmann::json& j, const Instance& inst, PolicyTable& table_storage);

// --- policy table CSV ----------------------------------------------------------
// Columns pipe_1..pipe_k,position,q_r,q_e; one row per state in id order.
void save_policy_csv(const PolicyTable& table, const std::string& path);
PolicyTable load_policy_csv(const std::string& path, const Instance& inst);

// --- run manifest ----------------------------------------------------------------
// Reproducibility metadata embedded in every output (without the timestamp,
// so outputs stay byte-identical across reruns) and written alongside as
// <output>.manifest.json (with the timestamp).
nlohmann::json make_manifest(const std::vector<std::string>& argv_vec, const nlohmann::json& instance_json,
                             const nlohmann::json& tolerances);

// Writes canonical JSON; when manifest is non-null also writes
// path + ".manifest.json" including a timestamp.
void write_output(const std::string& path, const nlohmann::json& body, const nlohmann::json* manifest);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace dualsrc
