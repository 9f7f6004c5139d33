#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpb/bounds.hpp"
#include "qpb/config.hpp"
#include "qpb/lattice.hpp"

namespace qpb {

struct PhaseTiming {
    std::string phase;
    double seconds = 0.0;
};

/// Everything one run produced.  Wall-clock timings go to a separate sidecar
/// file so manifest.json and the CSVs stay bitwise reproducible for a given
/// config and seed.
struct RunManifest {
    nlohmann::ordered_json config;  // resolved, t_end numeric
    std::string config_hash;
    std::string library_version;
    bool converged = false;
    std::vector<double> deltas;
    double residual_coarse = -1.0;  // max residual at J (-1: not computed)
    double residual_fine = -1.0;    // max residual at 2J
    std::vector<BoundReport> reports;
    std::vector<std::string> outputs;
    bool all_pass = false;
    std::vector<PhaseTiming> timings;
};

/// Enveloped random initial data: per mode, c(n) = B exp(-kappa|n|/2) rho
/// exp(i theta) with rho, theta drawn from the counter PRNG keyed by
/// (seed, n); c'(n) carries an extra |omega|.  With real_data only
/// lexicographically nonnegative modes are drawn and the rest are conjugate
/// partners (the zero mode is kept real).
std::pair<CoefficientField, CoefficientField> gen_init(
    const RunConfig& config, const FrequencySystem& fs);

/// Full pipeline: gen_init, Picard solve, RK4 reference, bound checks,
/// residual order check at (J, 2J).  Writes CSVs, manifest.json and
/// timings.json under out_dir unless write_files is false.
RunManifest run(const RunConfig& config, const std::filesystem::path& out_dir,
                bool write_files = true);

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);

}  // namespace qpb
