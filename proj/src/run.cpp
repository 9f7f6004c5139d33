#include "qpb/run.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qpb/evolution.hpp"
#include "qpb/io.hpp"
#include "qpb/random.hpp"
#include "qpb/synthesis.hpp"

namespace qpb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class PhaseClock {
  public:
    explicit PhaseClock(std::vector<PhaseTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto time(const std::string& phase, F&& body) {
        const auto start = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(body())>) {
                body();
                record(phase, start);
            } else {
                auto result = body();
                record(phase, start);
                return result;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("phase " + phase + ": " + e.what());
        }
    }

  private:
    void record(const std::string& phase,
                std::chrono::steady_clock::time_point start) {
        const std::chrono::duration<double> d =
            std::chrono::steady_clock::now() - start;
        sink_.push_back({phase, d.count()});
    }

    std::vector<PhaseTiming>& sink_;
};

int auto_substeps(const FrequencySystem& fs, double h) {
    return std::max(1, static_cast<int>(std::ceil(fs.lambda_max() * h / 0.1)));
}

}  // namespace

std::pair<CoefficientField, CoefficientField> gen_init(
    const RunConfig& config, const FrequencySystem& fs) {
    CoefficientField c0(fs.dimension(), fs.truncation_radius());
    CoefficientField c0p(fs.dimension(), fs.truncation_radius());
    for (const MultiIndex& n : fs.modes()) {
        if (config.real_data && !n.lex_nonnegative()) continue;
        const std::uint64_t key = rng::mode_key(config.seed, n);
        const double decay =
            config.B * std::exp(-config.kappa * n.l1() / 2.0);
        const double rho0 = rng::uniform01(key, 0);
        const double theta0 = kTwoPi * rng::uniform01(key, 1);
        const double rho1 = rng::uniform01(key, 2);
        const double theta1 = kTwoPi * rng::uniform01(key, 3);
        const bool keep_real = config.real_data && n.is_zero();
        const cplx phase0 =
            keep_real ? cplx{1.0, 0.0} : std::exp(cplx{0.0, theta0});
        const cplx phase1 =
            keep_real ? cplx{1.0, 0.0} : std::exp(cplx{0.0, theta1});
        c0.set(n, decay * rho0 * phase0);
        c0p.set(n, fs.omega_l1() * decay * rho1 * phase1);
    }
    if (config.real_data) {
        for (const MultiIndex& n : fs.modes()) {
            if (n.lex_nonnegative()) continue;
            c0.set(n, std::conj(c0.at(-n)));
            c0p.set(n, std::conj(c0p.at(-n)));
        }
    }
    return {std::move(c0), std::move(c0p)};
}

RunManifest run(const RunConfig& config, const std::filesystem::path& out_dir,
                bool write_files) {
    config.validate();
    RunManifest manifest;
    manifest.library_version = std::string(kLibraryVersion);
    PhaseClock clock(manifest.timings);

    const FrequencySystem fs = clock.time("setup", [&] {
        return config.frequency_system();
    });
    const DecayEnvelope env(config.B, config.kappa);
    const double t_end = config.resolve_t_end(fs);
    const TimeGrid grid(t_end, config.J);

    manifest.config = config.to_json(t_end);
    manifest.config_hash = hash_hex(fnv1a64(manifest.config.dump()));

    if (write_files) std::filesystem::create_directories(out_dir);

    manifest.reports.push_back(finalize_report(
        "nonresonance", 0.0, "", fs.resonance_floor(), 0.0));

    auto [c0, c0p] = clock.time("gen-init", [&] { return gen_init(config, fs); });
    if (write_files) {
        write_field_csv(out_dir / "c0.csv", c0);
        write_field_meta(out_dir / "c0.json", fs, c0.radius());
        write_field_csv(out_dir / "c0p.csv", c0p);
        write_field_meta(out_dir / "c0p.json", fs, c0p.radius());
        manifest.outputs.insert(manifest.outputs.end(),
                                {"c0.csv", "c0.json", "c0p.csv", "c0p.json"});
    }

    {
        BoundReport r = check_envelope(c0, env, 1.0, 2.0);
        r.name = "initial-envelope-position";
        manifest.reports.push_back(r);
        BoundReport rp = check_envelope(c0p, env, fs.omega_l1(), 2.0);
        rp.name = "initial-envelope-velocity";
        manifest.reports.push_back(rp);
    }

    PicardOptions opts;
    opts.tol = config.tol;
    opts.kmax = config.kmax;
    opts.envelope = env;
    // An explicit t_end or a widened divisor is a deliberate horizon choice;
    // only the conservative auto default keeps the hard gate.
    opts.allow_beyond_existence_time =
        config.t_end.has_value() || config.threshold_divisor != 192;
    opts.keep_history = true;
    const PicardResult picard = clock.time("picard", [&] {
        return picard_solve(c0, c0p, grid, fs, opts);
    });
    manifest.converged = picard.diagnostics.converged;
    manifest.deltas = picard.diagnostics.deltas;
    {
        const double last = picard.diagnostics.deltas.empty()
                                ? (c0.empty() && c0p.empty() ? 0.0 : 1.0)
                                : picard.diagnostics.deltas.back();
        manifest.reports.push_back(finalize_report(
            "picard-converged", config.tol, "", config.tol - last, 0.0));
    }

    clock.time("envelope-checks", [&] {
        double margin = std::numeric_limits<double>::infinity();
        std::string worst;
        for (std::size_t k = 0; k < picard.iterates.size(); ++k) {
            for (std::size_t j = 0; j < picard.iterates[k].fields.size(); ++j) {
                const BoundReport r =
                    check_envelope(picard.iterates[k].fields[j], env, 2.0, 4.0);
                if (r.margin < margin) {
                    margin = r.margin;
                    worst = "iterate " + std::to_string(k) + " node " +
                            std::to_string(j) + " mode " + r.worst;
                }
            }
        }
        manifest.reports.push_back(
            finalize_report("iterate-envelope", 2.0, worst, margin));
    });

    manifest.reports.push_back(
        check_contraction(picard.diagnostics, env, fs, grid));

    const TrajectoryField reference = clock.time("rk4-reference", [&] {
        OdeReferenceOptions ro;
        ro.substeps = auto_substeps(fs, grid.spacing());
        return ode_reference_solve(c0, c0p, grid, fs, ro);
    });
    {
        BoundReport r = uniqueness_compare(picard.trajectory, reference);
        r.name = "uniqueness-picard-vs-rk4";
        manifest.reports.push_back(r);
    }

    clock.time("zero-mode", [&] {
        const MultiIndex zero(std::vector<int>(fs.dimension(), 0));
        const cplx a = c0.at(zero);
        const cplx b = c0p.at(zero);
        double err = 0.0;
        for (int j = 0; j <= grid.intervals(); ++j)
            err = std::max(err, std::abs(picard.trajectory.fields[j].at(zero) -
                                         (a * std::cos(0.0) + b * grid.node(j))));
        manifest.reports.push_back(
            finalize_report("zero-mode-linearity", 0.0, "", -err, 0.0));
    });

    if (config.J >= 4) {
        const PicardResult fine = clock.time("picard-fine", [&] {
            TimeGrid fine_grid(t_end, 2 * config.J);
            PicardOptions fo = opts;
            fo.keep_history = false;
            return picard_solve(c0, c0p, fine_grid, fs, fo);
        });
        clock.time("residual", [&] {
            manifest.residual_coarse =
                max_spectral_residual(picard.trajectory, fs);
            manifest.residual_fine =
                max_spectral_residual(fine.trajectory, fs);
            manifest.reports.push_back(spectral_residual_order(
                picard.trajectory, fine.trajectory, fs));
        });
    }

    manifest.all_pass = true;
    for (const BoundReport& r : manifest.reports)
        manifest.all_pass = manifest.all_pass && r.pass;

    if (write_files) {
        clock.time("export", [&] {
            auto files = write_trajectory(out_dir / "trajectory",
                                          picard.trajectory, config.tol,
                                          config.kmax, picard.diagnostics);
            for (const std::string& f : files)
                manifest.outputs.push_back("trajectory/" + f);
        });
        std::ofstream mout(out_dir / "manifest.json", std::ios::binary);
        mout << manifest_to_json(manifest).dump(2) << '\n';
        manifest.outputs.push_back("manifest.json");

        nlohmann::ordered_json tj;
        tj["phases"] = nlohmann::ordered_json::array();
        for (const PhaseTiming& t : manifest.timings)
            tj["phases"].push_back({{"phase", t.phase}, {"seconds", t.seconds}});
        std::ofstream tout(out_dir / "timings.json", std::ios::binary);
        tout << tj.dump(2) << '\n';
    }
    return manifest;
}

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["config"] = manifest.config;
    j["config_hash"] = manifest.config_hash;
    j["library_version"] = manifest.library_version;
    j["converged"] = manifest.converged;
    j["deltas"] = manifest.deltas;
    if (manifest.residual_coarse >= 0.0) {
        j["residual_coarse"] = manifest.residual_coarse;
        j["residual_fine"] = manifest.residual_fine;
    }
    j["reports"] = nlohmann::ordered_json::array();
    for (const BoundReport& r : manifest.reports)
        j["reports"].push_back(report_to_json(r));
    j["outputs"] = manifest.outputs;
    j["all_pass"] = manifest.all_pass;
    return j;
}

}  // namespace qpb
