#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgn/dynamics.hpp"
#include "mgn/gpr.hpp"
#include "mgn/mlp.hpp"

namespace mgn {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

/// Formats with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Dataset CSV: header theta_a,theta_b,d,energy.
inline constexpr const char* kDatasetHeader = "theta_a,theta_b,d,energy";

struct DatasetReadReport {
  Dataset data;
  std::vector<std::string> warnings;  // e.g. rows outside the sampling cube
};

void write_dataset(const Dataset& data, const fs::path& path);
/// Malformed rows throw kSchema naming the line; out-of-cube rows only warn.
DatasetReadReport read_dataset(const fs::path& path, double L0 = 1.0);

// Model persistence.
struct ModelFileInfo {
  std::optional<ScalingBounds> bounds;  // from the training outputs
  std::optional<std::uint64_t> split_seed;
  Json extra = Json::object();
};

Json oracle_spec_to_json(const AnalyticOracleSpec& spec);
AnalyticOracleSpec oracle_spec_from_json(const Json& j);

Json model_to_json(const EdgeEnergyModel& model, const ModelFileInfo& info = {});
/// Throws kSchema on unknown kind or malformed fields.
ModelPtr model_from_json(const Json& j, ModelFileInfo* info = nullptr);

void save_model(const EdgeEnergyModel& model, const fs::path& path, const ModelFileInfo& info = {});
ModelPtr load_model(const fs::path& path, ModelFileInfo* info = nullptr);

// Lattice persistence.
Json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const Json& j);
void save_lattice(const Lattice& lattice, const fs::path& path);
Lattice load_lattice(const fs::path& path);

// Trajectory export: one CSV per snapshot plus a scalar log.
inline constexpr const char* kSnapshotHeader = "node,x1,x2,theta,v1,v2,omega";
inline constexpr const char* kLogHeader = "step,time,kinetic,potential,tracked_kinetic";

std::string snapshot_csv(const Snapshot& s);
std::string log_csv(const std::vector<LogEntry>& log);
/// Writes snapshot_<step>.csv files and log.csv into dir; returns written paths.
std::vector<fs::path> write_trajectory(const Trajectory& traj, const fs::path& dir);
Snapshot read_snapshot(const fs::path& path);

/// Parses a JSON file, mapping syntax errors (including truncation) to kSchema.
Json read_json(const fs::path& path);

}  // namespace mgn
