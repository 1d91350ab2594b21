#pragma once

#include <string>
#include <vector>

#include "evagan/metrics.hpp"

namespace evagan {

// Stable metrics CSV column order:
//   epoch,gen_validity,fake_min_eva,real_maj_est,real_min_eva,
//   d_loss_real_minority,d_loss_fake_minority,d_loss_majority,g_loss,
//   wall_seconds
// Values use shortest round-trip formatting, so re-emitting the same records
// yields byte-identical files. When zero_wall is set (deterministic runs) the
// wall_seconds column is written as 0; the measured values always go to the
// separate timings CSV.
void emit_metrics_csv(const std::vector<EpochMetrics>& records, const std::string& path,
                      bool zero_wall);

// epoch,wall_seconds (cumulative)
void emit_timings_csv(const std::vector<EpochMetrics>& records, const std::string& path);

// Run manifest JSON: configuration, seed, version tag.
void emit_manifest(const std::string& config_json, const std::string& path);

std::string version_string();

} // namespace evagan
