// Command line front end: simulate | clusterability | ablate | scaling | project.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcm/experiment.hpp"
#include "mcm/image.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& default_out) {
    cmd->add_option("--config", args.config_path, "JSON experiment config")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", args.out_dir, "output directory")->default_val(default_out);
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
}

mcm::ExperimentConfig load_config(const CommonArgs& args) {
    mcm::ExperimentConfig cfg;
    if (!args.config_path.empty())
        cfg = mcm::experiment_config_from_json(read_file(args.config_path));
    if (args.seed_set) cfg.seed = args.seed;
    return cfg;
}

void dump_pool(const mcm::ExperimentConfig& cfg, int count, const std::string& out_dir) {
    mcm::StreamConfig sc = cfg.stream;
    sc.seed = mcm::Rng::mix(cfg.seed, 0x57AE0ULL);  // same pool the run sees
    mcm::Stream stream(sc);
    std::filesystem::create_directories(std::filesystem::path(out_dir) / "pool");
    for (int c = 0; c < std::min(count, sc.classes); ++c) {
        const std::string name = "pool/class_" + std::to_string(c) + ".ppm";
        mcm::write_ppm(stream.pool_image(c, 0),
                       (std::filesystem::path(out_dir) / name).string());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounded multi-cluster memory harness"};
    app.require_subcommand(1);

    CommonArgs sim_args, clu_args, abl_args, sca_args, pro_args;

    auto* sim = app.add_subcommand("simulate", "run one stream through a memory variant");
    add_common(sim, sim_args, "out/simulate");
    std::string variant;
    long sim_steps = -1;
    int pool_images = 0;
    sim->add_option("--variant", variant, "mcm or scm")
        ->check(CLI::IsMember({"mcm", "scm"}));
    sim->add_option("--steps", sim_steps, "override step count (0 = header-only output)");
    sim->add_option("--dump-pool", pool_images, "also write N clean class images as PPM");

    auto* clu = app.add_subcommand("clusterability", "sliding-window component counts");
    add_common(clu, clu_args, "out/clusterability");
    std::size_t window = 576, stride = 288;
    int k_cap = 8;
    clu->add_option("--window", window, "descriptors per window");
    clu->add_option("--stride", stride, "window step");
    clu->add_option("--k-cap", k_cap, "largest component count tried");

    auto* abl = app.add_subcommand("ablate", "sweep one design axis");
    add_common(abl, abl_args, "out/ablate");
    std::string axis = "strategy";
    int repeats = 2;
    abl->add_option("--axis", axis, "tau, k_max, metric or strategy")
        ->check(CLI::IsMember({"tau", "k_max", "metric", "strategy"}));
    abl->add_option("--repeats", repeats, "seeds per value");

    auto* sca = app.add_subcommand("scaling", "paired variant runs, final energy only");
    add_common(sca, sca_args, "out/scaling");
    std::vector<long> step_counts{320};
    int seeds = 5;
    sca->add_option("--steps", step_counts, "step counts to run");
    sca->add_option("--seeds", seeds, "seeds per step count");

    auto* pro = app.add_subcommand("project", "2-D projection of the final memory");
    add_common(pro, pro_args, "out/project");
    long pro_steps = -1;
    pro->add_option("--steps", pro_steps, "override step count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            mcm::ExperimentConfig cfg = load_config(sim_args);
            if (!variant.empty()) cfg.variant = variant;
            if (sim_steps >= 0) cfg.steps = sim_steps;
            const mcm::RunResult r = mcm::run_simulate(cfg, sim_args.out_dir);
            if (pool_images > 0) dump_pool(cfg, pool_images, sim_args.out_dir);
            std::cout << "simulate: " << r.steps << " steps, " << r.rows.size()
                      << " metric rows, " << r.final_snapshot.clusters.size()
                      << " clusters -> " << sim_args.out_dir << "\n";
        } else if (clu->parsed()) {
            const mcm::ExperimentConfig cfg = load_config(clu_args);
            const auto summary =
                mcm::run_clusterability(cfg, window, stride, k_cap, clu_args.out_dir);
            std::cout << "clusterability: " << summary.points.size() << " windows, mean k* "
                      << summary.mean_k << " -> " << clu_args.out_dir << "\n";
        } else if (abl->parsed()) {
            const mcm::ExperimentConfig cfg = load_config(abl_args);
            const auto cells = mcm::run_ablate(cfg, axis, repeats, abl_args.out_dir);
            std::cout << "ablate: axis " << axis << ", " << cells.size() << " cells -> "
                      << abl_args.out_dir << "\n";
        } else if (sca->parsed()) {
            const mcm::ExperimentConfig cfg = load_config(sca_args);
            const auto cells = mcm::run_scaling(cfg, step_counts, seeds, sca_args.out_dir);
            std::cout << "scaling: " << cells.size() << " cells -> " << sca_args.out_dir << "\n";
        } else if (pro->parsed()) {
            mcm::ExperimentConfig cfg = load_config(pro_args);
            if (pro_steps >= 0) cfg.steps = pro_steps;
            mcm::export_projection(cfg, pro_args.out_dir);
            std::cout << "project -> " << pro_args.out_dir << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
