#include "vitaslam/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vitaslam/pose_cells.hpp"
#include "vitaslam/tactile.hpp"
#include "vitaslam/visual.hpp"

namespace vitaslam {

namespace {

void append_hex(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, " %a", v);
    out += buf;
}

void append_pose(std::string& out, const Pose& p) {
    append_hex(out, p.x);
    append_hex(out, p.y);
    append_hex(out, p.theta);
}

void validate(const Params& p) {
    if (p.visual_threshold <= 0.0) throw ConfigError("visual.threshold must be positive");
    if (p.visual_profile_len <= 0) throw ConfigError("visual.profile_len must be positive");
    if (p.tactile_threshold <= 0.0) throw ConfigError("tactile.threshold must be positive");
    if (p.tactile_w_pfh < 0.0 || p.tactile_w_sda < 0.0 ||
        std::fabs(p.tactile_w_pfh + p.tactile_w_sda - 1.0) > 1e-9) {
        throw ConfigError("tactile weights must be >= 0 and sum to 1");
    }
    if (p.tactile_normal_k < 2) throw ConfigError("tactile.normal_k must be >= 2");
    if (p.tactile_pfh_bins <= 0) throw ConfigError("tactile.pfh_bins must be positive");
    if (p.pc_nx < 1 || p.pc_ny < 1 || p.pc_nth < 1) throw ConfigError("pose cell dims must be positive");
    if (p.pc_inject_visual < 0.0 || p.pc_inject_tactile < 0.0) {
        throw ConfigError("injection gains must be >= 0");
    }
    if (p.map_r_pc <= 0.0) throw ConfigError("map.r_pc must be positive");
    if (p.map_alpha <= 0.0 || p.map_alpha > 1.0) throw ConfigError("map.alpha must be in (0,1]");
    if (p.map_relax_iterations < 0) throw ConfigError("map.relax_iterations must be >= 0");
    if (p.run_max_cycles < 0) throw ConfigError("run.max_cycles must be >= 0");
}

} // namespace

std::string mode_name(Mode mode) {
    return mode == Mode::VisualOnly ? "visual_only" : "vita";
}

RunReport run(const RunConfig& config, FrameSource& source, SensorLogWriter* recorder) {
    const Params& P = config.params;
    validate(P);

    ViewTemplateStore views(P.visual_threshold, P.visual_max_shift);
    TactileTemplateStore tactiles(P.tactile_w_pfh, P.tactile_w_sda, P.tactile_threshold);

    PoseCellGrid grid(P.pc_nx, P.pc_ny, P.pc_nth, P.pc_extent_x, P.pc_extent_y);
    grid.set_inhibition(P.pc_inhibition);
    grid.reset({P.pc_nx / 2.0, P.pc_ny / 2.0, 0.0});

    ExperienceMapParams map_params;
    map_params.r_pc = P.map_r_pc;
    map_params.alpha = P.map_alpha;
    map_params.relax_iterations = P.map_relax_iterations;
    map_params.nx = P.pc_nx;
    map_params.ny = P.pc_ny;
    map_params.nth = P.pc_nth;
    ExperienceMap map(map_params);

    int cycles = source.total_cycles();
    if (P.run_max_cycles > 0) cycles = std::min(cycles, P.run_max_cycles);

    RunReport report;
    report.mode = config.mode;
    report.seed = P.sim.seed;
    report.cycles = cycles;

    std::vector<Pose> truth_at_cycle(static_cast<std::size_t>(std::max(cycles, 0)));
    const std::size_t pfh_size =
        static_cast<std::size_t>(P.tactile_pfh_bins) * P.tactile_pfh_bins * P.tactile_pfh_bins;

    for (int c = 0; c < cycles; ++c) {
        try {
            const SensorFrame f = source.frame(c);
            if (recorder) recorder->write(f);
            truth_at_cycle[static_cast<std::size_t>(c)] = f.truth;

            // Visual pathway.
            const GrayImage gray = to_grayscale(f.rgb);
            std::vector<double> profile = extract_view_template(gray, P.visual_profile_len);
            const MatchResult v_match = views.match(profile);

            // Tactile pathway. PFH works on head-frame contacts: the
            // descriptor is rigid-motion invariant, so no pose estimate is
            // needed (or allowed) here.
            TactileTemplate t_cur;
            t_cur.pfh.assign(pfh_size, 0.0);
            t_cur.sda = compute_sda(f.whisk.deflections);
            if (f.whisk.contacts.size() >= 2) {
                std::vector<Point2> pts;
                pts.reserve(f.whisk.contacts.size());
                for (const WhiskerContact& wc : f.whisk.contacts) pts.push_back(wc.point_head);
                const std::vector<Point2> normals =
                    estimate_normals(pts, Point2{0.0, 0.0}, P.tactile_normal_k);
                t_cur.pfh = compute_pfh(pts, normals, P.tactile_pfh_bins);
            }
            const MatchResult t_match = (config.mode == Mode::Vita)
                                            ? tactiles.match(t_cur)
                                            : MatchResult::no_contact();

            // Pose cell network.
            grid.path_integrate(f.odom);
            if (v_match.is_matched()) {
                grid.inject(views.templates()[static_cast<std::size_t>(v_match.id)].learned_pose_cell,
                            P.pc_inject_visual);
            }
            if (t_match.is_matched()) {
                grid.inject(tactiles.templates()[static_cast<std::size_t>(t_match.id)].learned_pose_cell,
                            P.pc_inject_tactile);
            }
            grid.step_attractor();
            const PoseEstimate est = grid.decode();

            if (v_match.is_novel()) views.add(std::move(profile), est.cell_coords);
            if (t_match.is_novel()) tactiles.add(t_cur, est.cell_coords);

            // Experience map.
            const Pose odom_step(f.odom.dforward, 0.0, f.odom.dtheta);
            const UpdateOutcome outcome =
                map.update(v_match, t_match, est.cell_coords, odom_step, c);
            if (outcome.kind == UpdateOutcome::Kind::LoopClosure) {
                report.loop_closures.push_back(outcome.event);
                map.relax(P.map_relax_iterations);
            }

            report.trace.push_back({c, f.truth, est.pose, map.active_id()});
            report.template_growth.push_back({c, views.size(), tactiles.size()});
        } catch (const std::exception& e) {
            throw PipelineError(c, e.what());
        }
    }

    map.relax(P.map_relax_iterations);

    report.view_template_count = views.size();
    report.tactile_template_count = tactiles.size();
    report.experiences = map.experiences();
    report.links = map.links();

    if (map.size() >= 2) {
        std::vector<Pose> truths;
        truths.reserve(report.experiences.size());
        for (const Experience& e : report.experiences) {
            truths.push_back(truth_at_cycle.at(static_cast<std::size_t>(e.cycle)));
        }
        report.ate_before_relax = absolute_trajectory_error(map.odo_poses(), truths);
        report.ate_after_relax = absolute_trajectory_error(map.map_poses(), truths);
    }
    return report;
}

RunReport run_live(const RunConfig& config, SensorLogWriter* recorder) {
    SimulatorSource source(config.params.sim);
    return run(config, source, recorder);
}

ComparisonReport compare(const RunConfig& a, const RunConfig& b) {
    if (a.params.sim.seed != b.params.sim.seed) {
        throw ConfigError("compare: runs must share a seed");
    }
    if (a.mode == b.mode) {
        throw ConfigError("compare: runs must differ in mode");
    }
    ComparisonReport cmp;
    cmp.a = run_live(a);
    cmp.b = run_live(b);
    return cmp;
}

std::string report_to_string(const RunReport& r) {
    std::string out = "report mode=" + mode_name(r.mode) + " seed=" + std::to_string(r.seed) +
                      " cycles=" + std::to_string(r.cycles) + "\n";
    out += "templates " + std::to_string(r.view_template_count) + " " +
           std::to_string(r.tactile_template_count) + "\n";
    std::string line = "ate";
    append_hex(line, r.ate_before_relax.rmse_position);
    append_hex(line, r.ate_before_relax.rmse_heading);
    append_hex(line, r.ate_after_relax.rmse_position);
    append_hex(line, r.ate_after_relax.rmse_heading);
    out += line + "\n";
    for (const LoopClosureEvent& e : r.loop_closures) {
        out += "closure " + std::to_string(e.current_exp) + " " + std::to_string(e.matched_exp) +
               " " + std::to_string(e.cycle) + "\n";
    }
    for (const Experience& e : r.experiences) {
        line = "exp " + std::to_string(e.id) + " " + std::to_string(e.view_id) + " " +
               std::to_string(e.tactile_id) + " " + std::to_string(e.cycle);
        append_hex(line, e.cell_coords.x);
        append_hex(line, e.cell_coords.y);
        append_hex(line, e.cell_coords.th);
        append_pose(line, e.map_pose);
        append_pose(line, e.odo_pose);
        out += line + "\n";
    }
    for (const Link& l : r.links) {
        line = "link " + std::to_string(l.from) + " " + std::to_string(l.to) + " " +
               std::to_string(l.cycle);
        append_pose(line, l.delta);
        out += line + "\n";
    }
    for (const TraceRow& t : r.trace) {
        line = "trace " + std::to_string(t.cycle) + " " + std::to_string(t.active_experience);
        append_pose(line, t.truth);
        append_pose(line, t.decoded);
        out += line + "\n";
    }
    for (const TemplateGrowthRow& g : r.template_growth) {
        out += "growth " + std::to_string(g.cycle) + " " + std::to_string(g.view_count) + " " +
               std::to_string(g.tactile_count) + "\n";
    }
    return out;
}

void write_report_csv(std::ostream& os, const RunReport& r) {
    os.precision(17);
    os << "key,value\n";
    os << "mode," << mode_name(r.mode) << "\n";
    os << "seed," << r.seed << "\n";
    os << "cycles," << r.cycles << "\n";
    os << "view_templates," << r.view_template_count << "\n";
    os << "tactile_templates," << r.tactile_template_count << "\n";
    os << "experiences," << r.experiences.size() << "\n";
    os << "links," << r.links.size() << "\n";
    os << "loop_closures," << r.loop_closures.size() << "\n";
    os << "ate_before_relax_position_m," << r.ate_before_relax.rmse_position << "\n";
    os << "ate_before_relax_heading_rad," << r.ate_before_relax.rmse_heading << "\n";
    os << "ate_after_relax_position_m," << r.ate_after_relax.rmse_position << "\n";
    os << "ate_after_relax_heading_rad," << r.ate_after_relax.rmse_heading << "\n";
    for (std::size_t i = 0; i < r.loop_closures.size(); ++i) {
        const LoopClosureEvent& e = r.loop_closures[i];
        os << "closure_" << i << ',' << e.current_exp << '>' << e.matched_exp << "@cycle"
           << e.cycle << "\n";
    }
}

void write_trace_csv(std::ostream& os, const RunReport& r) {
    os.precision(17);
    os << "cycle,truth_x,truth_y,truth_theta,decoded_x,decoded_y,decoded_theta,active_experience\n";
    for (const TraceRow& t : r.trace) {
        os << t.cycle << ',' << t.truth.x << ',' << t.truth.y << ',' << t.truth.theta << ','
           << t.decoded.x << ',' << t.decoded.y << ',' << t.decoded.theta << ','
           << t.active_experience << "\n";
    }
}

void write_templates_csv(std::ostream& os, const RunReport& r) {
    os << "cycle,view_templates,tactile_templates\n";
    for (const TemplateGrowthRow& g : r.template_growth) {
        os << g.cycle << ',' << g.view_count << ',' << g.tactile_count << "\n";
    }
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& cmp) {
    os.precision(17);
    os << "metric," << mode_name(cmp.a.mode) << ',' << mode_name(cmp.b.mode) << "\n";
    os << "view_templates," << cmp.a.view_template_count << ',' << cmp.b.view_template_count
       << "\n";
    os << "tactile_templates," << cmp.a.tactile_template_count << ','
       << cmp.b.tactile_template_count << "\n";
    os << "loop_closures," << cmp.a.loop_closures.size() << ',' << cmp.b.loop_closures.size()
       << "\n";
    os << "experiences," << cmp.a.experiences.size() << ',' << cmp.b.experiences.size() << "\n";
    os << "ate_before_relax_position_m," << cmp.a.ate_before_relax.rmse_position << ','
       << cmp.b.ate_before_relax.rmse_position << "\n";
    os << "ate_after_relax_position_m," << cmp.a.ate_after_relax.rmse_position << ','
       << cmp.b.ate_after_relax.rmse_position << "\n";
}

} // namespace vitaslam
