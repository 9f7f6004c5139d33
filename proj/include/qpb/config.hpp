#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpb/lattice.hpp"

namespace qpb {

/// One run of the laboratory, fully described.  All defaults live here and
/// are echoed into the manifest; there is no hidden state.
struct RunConfig {
    int nu = 1;
    std::vector<double> omega{1.0};
    int N = 6;
    double B = 1.0;
    double kappa = 1.0;
    std::uint64_t seed = 1;
    std::optional<double> t_end;  // std::nullopt means "auto" (existence time)
    int J = 128;
    double tol = 1e-10;
    int kmax = 20;
    int threshold_divisor = 192;  // 24, 48, 96 or 192
    bool real_data = true;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::filesystem::path& path);

    /// KEY=VAL override; omega takes a comma-separated list, t_end accepts
    /// "auto".
    void apply_override(const std::string& assignment);

    void validate() const;

    FrequencySystem frequency_system() const;
    double resolve_t_end(const FrequencySystem& fs) const;

    nlohmann::ordered_json to_json(std::optional<double> resolved_t_end =
                                       std::nullopt) const;
};

}  // namespace qpb
