#pragma once

#include <map>
#include <string>
#include <vector>

#include "stirlab/config.hpp"

namespace stirlab {

struct ExperimentRecord {
    json record;                            // config + hash + summary + metadata
    std::map<std::string, double> summary;  // flat numeric results
    std::string out_dir;
};

/// Runs the named experiment, persisting CSV diagnostics, TSL1 snapshots
/// and record.json under out_dir. The config must already validate.
ExperimentRecord run_experiment(const json& cfg, const std::string& out_dir, int threads = 1);

/// Cartesian-product sweep over cfg["sweep"] applied to cfg["base"]; jobs
/// run on a bounded pool, each into its own subdirectory, with a merged
/// summary CSV sorted by parameters.
std::vector<ExperimentRecord> run_sweep(const json& cfg, const std::string& out_dir,
                                        int threads = 1);

}  // namespace stirlab
