#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vitaslam/pipeline.hpp"
#include "vitaslam/plots.hpp"

namespace {

using namespace vitaslam;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> cycles;
};

Params make_params(const CommonArgs& args) {
    Params params;
    if (!args.config_path.empty()) params = load_config_file(args.config_path);
    if (args.seed) params.sim.seed = *args.seed;
    if (args.cycles) params.run_max_cycles = *args.cycles;
    return params;
}

Mode parse_mode(const std::string& name) {
    if (name == "visual_only") return Mode::VisualOnly;
    if (name == "vita") return Mode::Vita;
    throw ConfigError("unknown mode: " + name);
}

void print_summary(const RunReport& r) {
    std::cout << "mode=" << mode_name(r.mode) << " seed=" << r.seed << " cycles=" << r.cycles
              << "\n"
              << "view templates:    " << r.view_template_count << "\n"
              << "tactile templates: " << r.tactile_template_count << "\n"
              << "experiences:       " << r.experiences.size() << "\n"
              << "loop closures:     " << r.loop_closures.size() << "\n"
              << "ate position, before relax: " << r.ate_before_relax.rmse_position
              << " m, after: " << r.ate_after_relax.rmse_position << " m\n";
}

int cmd_run(const CommonArgs& args, const std::string& mode, const std::string& record_path) {
    RunConfig config{parse_mode(mode), make_params(args)};

    std::ofstream record_stream;
    std::optional<SensorLogWriter> recorder;
    if (!record_path.empty()) {
        record_stream.open(record_path);
        if (!record_stream) throw std::runtime_error("cannot write sensor log: " + record_path);
        recorder.emplace(record_stream, config.params.sim.camera.width,
                         config.params.sim.camera.height);
    }

    const RunReport report = run_live(config, recorder ? &*recorder : nullptr);
    emit_plots(report, args.out_dir);
    print_summary(report);
    return 0;
}

int cmd_replay(const CommonArgs& args, const std::string& mode, const std::string& log_path) {
    RunConfig config{parse_mode(mode), make_params(args)};
    ReplaySource source(read_sensor_log_file(log_path));
    const RunReport report = run(config, source);
    emit_plots(report, args.out_dir);
    print_summary(report);
    return 0;
}

int cmd_compare(const CommonArgs& args) {
    const Params params = make_params(args);
    const RunConfig visual{Mode::VisualOnly, params};
    const RunConfig vita{Mode::Vita, params};
    const ComparisonReport cmp = compare(visual, vita);

    namespace fs = std::filesystem;
    emit_plots(cmp.a, (fs::path(args.out_dir) / "visual_only").string());
    emit_plots(cmp.b, (fs::path(args.out_dir) / "vita").string());
    {
        std::ofstream os(fs::path(args.out_dir) / "comparison.csv");
        if (!os) throw std::runtime_error("cannot write comparison.csv in " + args.out_dir);
        write_comparison_csv(os, cmp);
    }
    print_summary(cmp.a);
    std::cout << "----\n";
    print_summary(cmp.b);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Visuo-tactile SLAM harness: scripted arena runs, mode comparisons, replay"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string mode = "vita";
    std::string record_path;
    std::string log_path;

    auto add_common = [&](CLI::App* cmd, bool with_out = true) {
        cmd->add_option("--config", args.config_path, "key = value config file");
        cmd->add_option("--seed", args.seed, "override sim.seed");
        cmd->add_option("--cycles", args.cycles, "cap the number of cycles");
        if (with_out) cmd->add_option("--out", args.out_dir, "output directory")->required();
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run SLAM against the live simulator");
    add_common(run_cmd);
    run_cmd->add_option("--mode", mode, "visual_only or vita")
        ->check(CLI::IsMember({"visual_only", "vita"}));
    run_cmd->add_option("--record", record_path, "record consumed frames to this sensor log");

    CLI::App* replay_cmd = app.add_subcommand("replay", "run SLAM over a recorded sensor log");
    add_common(replay_cmd);
    replay_cmd->add_option("--mode", mode, "visual_only or vita")
        ->check(CLI::IsMember({"visual_only", "vita"}));
    replay_cmd->add_option("--log", log_path, "sensor log file")->required();

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "visual_only vs vita on the identical frame stream");
    add_common(compare_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(args, mode, record_path);
        if (replay_cmd->parsed()) return cmd_replay(args, mode, log_path);
        return cmd_compare(args);
    } catch (const vitaslam::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
