#pragma once

#include <filesystem>
#include <string>

#include "scns/ensemble.hpp"
#include "scns/integrator.hpp"

namespace scns {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

/// Parses and validates the JSON run configuration. Unknown keys, missing
/// keys and malformed values are rejected with their key path; K_c >= 1 is
/// rejected citing Assumption (A.1). A manifest document (anything carrying
/// a "config_echo" object) is accepted and unwrapped, so a run can be
/// repeated straight from its manifest.
SimConfig parse_config(const std::string& text);

SimConfig load_config(const std::filesystem::path& file);

/// Lossless JSON echo of a resolved config (round-trips bitwise through
/// parse_config).
std::string config_to_json(const SimConfig& cfg);

/// Builds u0 from the config's initial section, normalized onto the sphere.
SpectralVelocity make_initial_condition(const SimConfig& cfg);

/// CSV time series, header
///   t,h_norm,v_norm_sq,da_norm_sq,dissipation,constraint_err,mu_n
/// one row per recorded time, 17 significant digits.
void write_timeseries(const TrajectoryRecord& traj,
                      const std::filesystem::path& file);

/// Spectral snapshot, little-endian binary: magic "SCNS", u32 format
/// version, i32 n_max, u64 mode count, then per mode in space ordering
/// k1 (i32), k2 (i32), Re psi (f64), Im psi (f64).
void write_snapshot(const SpectralVelocity& u,
                    const std::filesystem::path& file);
SpectralVelocity read_snapshot(const std::filesystem::path& file);

struct RunManifest {
  SimConfig config;
  std::string artifact_version = kArtifactVersion;
  int format_version = kFormatVersion;
  std::string created_at;  // ISO-8601 UTC
  std::uint64_t master_seed = 0;
};

RunManifest make_manifest(const SimConfig& cfg);
void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& file);

/// Ensemble statistics: per-time CSV plus a JSON summary of the scalar
/// functionals.
void write_ensemble_stats(const EnsembleStats& stats,
                          const std::filesystem::path& csv_file,
                          const std::filesystem::path& summary_file);

}  // namespace scns
