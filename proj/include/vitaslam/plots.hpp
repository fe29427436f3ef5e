#ifndef VITASLAM_PLOTS_HPP
#define VITASLAM_PLOTS_HPP

#include <string>

#include "vitaslam/pipeline.hpp"

namespace vitaslam {

/// Experience map as an SVG document: the true trajectory as a polyline
/// (class "truth"), odometric links as lines (class "link", loop-closure
/// links class "closure") and experiences as circles (class "exp").
std::string render_map_svg(const RunReport& report);

/// Write report.csv, templates.csv, trace.csv and map.svg into out_dir
/// (created if missing). I/O failures carry the offending path.
void emit_plots(const RunReport& report, const std::string& out_dir);

} // namespace vitaslam

#endif
