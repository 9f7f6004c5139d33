#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qpb/bounds.hpp"
#include "qpb/evolution.hpp"
#include "qpb/lattice.hpp"

namespace qpb {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view text);
std::string hash_hex(std::uint64_t h);

/// CSV with header n1,...,nV,re,im, one row per nonzero mode in
/// lexicographic order.
void write_field_csv(const std::filesystem::path& path,
                     const CoefficientField& field);

/// JSON sidecar {nu, omega[], radius}.
void write_field_meta(const std::filesystem::path& path,
                      const FrequencySystem& fs, int radius);

CoefficientField read_field_csv(const std::filesystem::path& path, int nu,
                                int radius);

/// node_NNNN.csv per grid node plus trajectory.json
/// {t_end, J, tol, kmax, converged, deltas[]}.
std::vector<std::string> write_trajectory(const std::filesystem::path& dir,
                                          const TrajectoryField& traj,
                                          double tol, int kmax,
                                          const PicardDiagnostics& diag);

nlohmann::ordered_json report_to_json(const BoundReport& report);

}  // namespace qpb
