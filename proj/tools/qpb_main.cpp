#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpb/bounds.hpp"
#include "qpb/config.hpp"
#include "qpb/evolution.hpp"
#include "qpb/io.hpp"
#include "qpb/rational.hpp"
#include "qpb/run.hpp"
#include "qpb/synthesis.hpp"
#include "qpb/trees.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> overrides;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--override", args.overrides,
                    "KEY=VAL config override (repeatable)");
}

qpb::RunConfig load_config(const CommonArgs& args) {
    qpb::RunConfig config = args.config_path.empty()
                                ? qpb::RunConfig{}
                                : qpb::RunConfig::from_file(args.config_path);
    if (args.seed_set) config.seed = args.seed;
    for (const std::string& o : args.overrides) config.apply_override(o);
    config.validate();
    return config;
}

int cmd_gen_init(const CommonArgs& args) {
    const qpb::RunConfig config = load_config(args);
    const qpb::FrequencySystem fs = config.frequency_system();
    const auto [c0, c0p] = qpb::gen_init(config, fs);
    std::filesystem::create_directories(args.out_dir);
    const std::filesystem::path dir(args.out_dir);
    qpb::write_field_csv(dir / "c0.csv", c0);
    qpb::write_field_meta(dir / "c0.json", fs, c0.radius());
    qpb::write_field_csv(dir / "c0p.csv", c0p);
    qpb::write_field_meta(dir / "c0p.json", fs, c0p.radius());
    std::cout << "wrote c0.csv, c0p.csv under " << args.out_dir << "\n";
    return 0;
}

int cmd_solve(const CommonArgs& args) {
    const qpb::RunConfig config = load_config(args);
    const qpb::RunManifest manifest = qpb::run(config, args.out_dir, true);
    std::cout << "manifest: " << (std::filesystem::path(args.out_dir) /
                                  "manifest.json").string()
              << "\nconverged: " << (manifest.converged ? "true" : "false")
              << "\nall_pass: " << (manifest.all_pass ? "true" : "false")
              << "\n";
    return manifest.all_pass ? 0 : 1;
}

int cmd_verify(const CommonArgs& args) {
    const qpb::RunConfig config = load_config(args);
    const qpb::RunManifest manifest = qpb::run(config, args.out_dir, false);
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const qpb::BoundReport& r : manifest.reports)
        reports.push_back(qpb::report_to_json(r));
    std::cout << reports.dump(2) << "\n";
    return manifest.all_pass ? 0 : 1;
}

int cmd_trees(const CommonArgs& args) {
    nlohmann::ordered_json report;
    report["counts"] = nlohmann::ordered_json::object();
    for (int k = 1; k <= 4; ++k)
        report["counts"][std::to_string(k)] = qpb::enumerate_labels(k).size();

    report["weights_d3"] = nlohmann::ordered_json::array();
    for (const qpb::TreeLabel& label : qpb::enumerate_labels(3)) {
        const qpb::Weights w = qpb::weights(label);
        report["weights_d3"].push_back({{"label", label.to_string()},
                                        {"sigma", w.sigma},
                                        {"ell", w.ell},
                                        {"hbar", w.hbar},
                                        {"F", w.frak_f}});
    }

    report["weighted_tree_sum"] = nlohmann::ordered_json::array();
    const qpb::Rational t(1, 16);
    for (int k = 1; k <= 3; ++k) {
        const qpb::Rational v = qpb::weighted_tree_sum(k, t);
        report["weighted_tree_sum"].push_back({{"k", k},
                                {"t", t.to_string()},
                                {"value", v.to_string()},
                                {"pass", v <= qpb::Rational(2)}});
    }

    report["factorial_compositions"] = nlohmann::ordered_json::array();
    for (int N = 1; N <= 8; ++N)
        for (int l = 1; l <= N; ++l) {
            const std::uint64_t v = qpb::factorial_comp_sum(N, l);
            const std::uint64_t bound = qpb::factorial_comp_bound(N, l);
            report["factorial_compositions"].push_back({{"N", N},
                                    {"l", l},
                                    {"value", std::to_string(v)},
                                    {"bound", std::to_string(bound)},
                                    {"pass", v < bound}});
        }

    std::cout << report.dump(2) << "\n";
    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        std::ofstream out(std::filesystem::path(args.out_dir) / "trees.json",
                          std::ios::binary);
        out << report.dump(2) << '\n';
    }
    return 0;
}

int cmd_residual(const CommonArgs& args) {
    const qpb::RunConfig config = load_config(args);
    const qpb::FrequencySystem fs = config.frequency_system();
    const qpb::DecayEnvelope env(config.B, config.kappa);
    const double t_end = config.resolve_t_end(fs);
    const auto [c0, c0p] = qpb::gen_init(config, fs);

    qpb::PicardOptions opts;
    opts.tol = config.tol;
    opts.kmax = config.kmax;
    opts.envelope = env;
    opts.allow_beyond_existence_time =
        config.t_end.has_value() || config.threshold_divisor != 192;

    const qpb::TimeGrid coarse_grid(t_end, config.J);
    const qpb::TimeGrid fine_grid(t_end, 2 * config.J);
    const auto coarse = qpb::picard_solve(c0, c0p, coarse_grid, fs, opts);
    const auto fine = qpb::picard_solve(c0, c0p, fine_grid, fs, opts);

    std::vector<double> per_node;
    const double r_coarse =
        qpb::max_spectral_residual(coarse.trajectory, fs, true, &per_node);
    const double r_fine = qpb::max_spectral_residual(fine.trajectory, fs);

    std::filesystem::create_directories(args.out_dir);
    {
        std::ofstream csv(std::filesystem::path(args.out_dir) / "residual.csv",
                          std::ios::binary);
        csv << "t,max_mode_residual\n";
        for (int j = 0; j <= coarse_grid.intervals(); ++j)
            csv << qpb::format_double(coarse_grid.node(j)) << ','
                << qpb::format_double(per_node[j]) << '\n';
    }

    const qpb::BoundReport order =
        qpb::spectral_residual_order(coarse.trajectory, fine.trajectory, fs);
    nlohmann::ordered_json verdict;
    verdict["residual_coarse"] = r_coarse;
    verdict["residual_fine"] = r_fine;
    verdict["ratio"] = r_fine > 0.0 ? r_coarse / r_fine : 0.0;
    verdict["pass"] = order.pass;
    std::cout << verdict.dump(2) << "\n";
    {
        std::ofstream out(std::filesystem::path(args.out_dir) / "residual.json",
                          std::ios::binary);
        out << verdict.dump(2) << '\n';
    }
    return order.pass ? 0 : 1;
}

int cmd_bench(const CommonArgs& args) {
    const qpb::RunConfig base = load_config(args);
    std::string csv = "N,modes,ns_per_op\n";
    for (int N : {4, 6, 8, 10, 12}) {
        qpb::RunConfig config = base;
        config.N = N;
        const qpb::FrequencySystem fs = config.frequency_system();
        const auto [c0, c0p] = qpb::gen_init(config, fs);

        volatile double sink = 0.0;
        int reps = 0;
        const auto start = std::chrono::steady_clock::now();
        std::chrono::duration<double> elapsed{0.0};
        while (elapsed.count() < 0.2 || reps < 10) {
            const qpb::CoefficientField a = qpb::weighted_self_convolution(c0, fs);
            sink = sink + qpb::sup_abs(a);
            ++reps;
            elapsed = std::chrono::steady_clock::now() - start;
        }
        const double ns = elapsed.count() * 1e9 / reps;
        csv += std::to_string(N) + ',' + std::to_string(fs.modes().size()) +
               ',' + qpb::format_double(ns) + '\n';
    }
    std::cout << csv;
    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        std::ofstream out(std::filesystem::path(args.out_dir) / "bench.csv",
                          std::ios::binary);
        out << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral laboratory for a quasi-periodic nonlinear beam equation"};
    app.require_subcommand(1);

    CommonArgs gen_args, solve_args, verify_args, trees_args, residual_args,
        bench_args;
    attach_common(app.add_subcommand("gen-init", "generate enveloped initial data"),
                  gen_args);
    attach_common(app.add_subcommand("solve", "run the full pipeline"),
                  solve_args);
    attach_common(app.add_subcommand("verify", "run checks, emit report JSON"),
                  verify_args);
    attach_common(app.add_subcommand("trees", "tree combinatorics report"),
                  trees_args);
    attach_common(app.add_subcommand("residual", "second-difference residual check"),
                  residual_args);
    attach_common(app.add_subcommand("bench", "time the lattice convolution"),
                  bench_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("gen-init")) return cmd_gen_init(gen_args);
        if (app.got_subcommand("solve")) return cmd_solve(solve_args);
        if (app.got_subcommand("verify")) return cmd_verify(verify_args);
        if (app.got_subcommand("trees")) return cmd_trees(trees_args);
        if (app.got_subcommand("residual")) return cmd_residual(residual_args);
        if (app.got_subcommand("bench")) return cmd_bench(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
