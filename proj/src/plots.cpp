#include "vitaslam/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vitaslam {

namespace {

struct Bounds {
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;

    void include(double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
};

} // namespace

std::string render_map_svg(const RunReport& report) {
    Bounds b;
    bool any = false;
    for (const TraceRow& t : report.trace) {
        if (!any) {
            b = Bounds{t.truth.x, t.truth.x, t.truth.y, t.truth.y};
            any = true;
        }
        b.include(t.truth.x, t.truth.y);
    }
    for (const Experience& e : report.experiences) {
        if (!any) {
            b = Bounds{e.map_pose.x, e.map_pose.x, e.map_pose.y, e.map_pose.y};
            any = true;
        }
        b.include(e.map_pose.x, e.map_pose.y);
    }

    const double pad = 0.5;
    const double w = (b.max_x - b.min_x) + 2 * pad;
    const double h = (b.max_y - b.min_y) + 2 * pad;
    const double scale = 100.0; // pixels per meter
    auto sx = [&](double x) { return (x - b.min_x + pad) * scale; };
    auto sy = [&](double y) { return (b.max_y - y + pad) * scale; }; // y up

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale << "\" height=\""
       << h * scale << "\" viewBox=\"0 0 " << w * scale << ' ' << h * scale << "\">\n";
    os << "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"" << w * scale << "\" height=\""
       << h * scale << "\" fill=\"white\" stroke=\"#cccccc\"/>\n";

    if (!report.trace.empty()) {
        os << "<polyline class=\"truth\" fill=\"none\" stroke=\"#90c090\" stroke-width=\"2\" "
              "points=\"";
        for (const TraceRow& t : report.trace) os << sx(t.truth.x) << ',' << sy(t.truth.y) << ' ';
        os << "\"/>\n";
    }

    // Closure links get their own class; everything else is an odometric link.
    auto is_closure = [&](const Link& l) {
        return std::any_of(report.loop_closures.begin(), report.loop_closures.end(),
                           [&](const LoopClosureEvent& e) {
                               return e.current_exp == l.from && e.matched_exp == l.to &&
                                      e.cycle == l.cycle;
                           });
    };
    for (const Link& l : report.links) {
        const Experience& from = report.experiences.at(static_cast<std::size_t>(l.from));
        const Experience& to = report.experiences.at(static_cast<std::size_t>(l.to));
        const bool closure = is_closure(l);
        os << "<line class=\"" << (closure ? "closure" : "link") << "\" x1=\""
           << sx(from.map_pose.x) << "\" y1=\"" << sy(from.map_pose.y) << "\" x2=\""
           << sx(to.map_pose.x) << "\" y2=\"" << sy(to.map_pose.y) << "\" stroke=\""
           << (closure ? "#d04040" : "#8080c0") << "\" stroke-width=\""
           << (closure ? 3 : 1) << "\"/>\n";
    }

    for (const Experience& e : report.experiences) {
        os << "<circle class=\"exp\" cx=\"" << sx(e.map_pose.x) << "\" cy=\""
           << sy(e.map_pose.y) << "\" r=\"3\" fill=\"#404080\"/>\n";
    }

    os << "</svg>\n";
    return os.str();
}

void emit_plots(const RunReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + out_dir);

    auto open = [&](const std::string& name) {
        std::ofstream os(fs::path(out_dir) / name);
        if (!os) throw std::runtime_error("cannot write " + (fs::path(out_dir) / name).string());
        return os;
    };

    {
        auto os = open("report.csv");
        write_report_csv(os, report);
    }
    {
        auto os = open("templates.csv");
        write_templates_csv(os, report);
    }
    {
        auto os = open("trace.csv");
        write_trace_csv(os, report);
    }
    {
        auto os = open("map.svg");
        os << render_map_svg(report);
    }
}

} // namespace vitaslam
