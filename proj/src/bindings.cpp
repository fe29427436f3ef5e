#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "vitaslam/config.hpp"
#include "vitaslam/experience_map.hpp"
#include "vitaslam/geometry.hpp"
#include "vitaslam/pipeline.hpp"
#include "vitaslam/plots.hpp"
#include "vitaslam/pose_cells.hpp"
#include "vitaslam/tactile.hpp"
#include "vitaslam/visual.hpp"

namespace py = pybind11;
using namespace vitaslam;

namespace {

std::array<double, kWhiskerCount> to_deflections(const std::vector<double>& v) {
    if (v.size() != static_cast<std::size_t>(kWhiskerCount)) {
        throw std::invalid_argument("expected exactly 24 deflections");
    }
    std::array<double, kWhiskerCount> a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

Mode to_mode(const std::string& name) {
    if (name == "visual_only") return Mode::VisualOnly;
    if (name == "vita") return Mode::Vita;
    throw std::invalid_argument("mode must be 'visual_only' or 'vita'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Visuo-tactile SLAM core: geometry, templates, pose cells, experience map, runs";

    py::class_<Point2>(m, "Point2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Point2{x, y}; }), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Point2::x)
        .def_readwrite("y", &Point2::y)
        .def("__repr__", [](const Point2& p) {
            std::ostringstream os;
            os << "Point2(" << p.x << ", " << p.y << ")";
            return os.str();
        });

    py::class_<Pose>(m, "Pose")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("theta"))
        .def_readwrite("x", &Pose::x)
        .def_readwrite("y", &Pose::y)
        .def_readwrite("theta", &Pose::theta)
        .def("__repr__", [](const Pose& p) {
            std::ostringstream os;
            os << "Pose(" << p.x << ", " << p.y << ", " << p.theta << ")";
            return os.str();
        });

    py::class_<Twist>(m, "Twist")
        .def(py::init<>())
        .def(py::init([](double df, double dth) { return Twist{df, dth}; }),
             py::arg("dforward"), py::arg("dtheta"))
        .def_readwrite("dforward", &Twist::dforward)
        .def_readwrite("dtheta", &Twist::dtheta);

    py::class_<CellCoords>(m, "CellCoords")
        .def(py::init<>())
        .def(py::init([](double x, double y, double th) { return CellCoords{x, y, th}; }),
             py::arg("x"), py::arg("y"), py::arg("th"))
        .def_readwrite("x", &CellCoords::x)
        .def_readwrite("y", &CellCoords::y)
        .def_readwrite("th", &CellCoords::th);

    m.def("wrap_angle", &wrap_angle, py::arg("theta"));
    m.def("compose", &compose, py::arg("a"), py::arg("b"));
    m.def("inverse", &inverse, py::arg("p"));
    m.def("between", &between, py::arg("a"), py::arg("b"));
    m.def("transform_point", &transform_point, py::arg("frame"), py::arg("p_local"));
    m.def("apply_twist", &apply_twist, py::arg("p"), py::arg("t"));

    // Tactile frontend.
    m.def("estimate_normals", &estimate_normals, py::arg("points"), py::arg("head"),
          py::arg("k") = 4);
    m.def("compute_pfh", &compute_pfh, py::arg("points"), py::arg("normals"),
          py::arg("bins_per_feature") = 5);
    m.def(
        "compute_sda",
        [](const std::vector<double>& deflections) {
            const auto arr = compute_sda(to_deflections(deflections));
            return std::vector<double>(arr.begin(), arr.end());
        },
        py::arg("deflections"));

    // Visual frontend.
    py::class_<RgbImage>(m, "RgbImage")
        .def(py::init([](int width, int height, py::bytes data) {
                 RgbImage img;
                 img.width = width;
                 img.height = height;
                 const std::string buf = data;
                 img.pixels.assign(buf.begin(), buf.end());
                 return img;
             }),
             py::arg("width"), py::arg("height"), py::arg("data"))
        .def_readonly("width", &RgbImage::width)
        .def_readonly("height", &RgbImage::height)
        .def_property_readonly("data", [](const RgbImage& img) {
            return py::bytes(reinterpret_cast<const char*>(img.pixels.data()),
                             img.pixels.size());
        });

    m.def(
        "extract_view_profile",
        [](const RgbImage& img, int profile_len) {
            return extract_view_template(to_grayscale(img), profile_len);
        },
        py::arg("image"), py::arg("profile_len") = 48);
    m.def("best_shift_distance", &best_shift_distance, py::arg("a"), py::arg("b"),
          py::arg("max_shift") = 4);

    // Pose cell network.
    py::class_<PoseEstimate>(m, "PoseEstimate")
        .def_readonly("cell_coords", &PoseEstimate::cell_coords)
        .def_readonly("pose", &PoseEstimate::pose);

    py::register_exception<DegenerateActivity>(m, "DegenerateActivityError");

    py::class_<PoseCellGrid>(m, "PoseCellGrid")
        .def(py::init<int, int, int, double, double>(), py::arg("nx") = 21, py::arg("ny") = 21,
             py::arg("nth") = 36, py::arg("extent_x") = 10.0, py::arg("extent_y") = 10.0)
        .def("reset", &PoseCellGrid::reset, py::arg("at"))
        .def("step_attractor", &PoseCellGrid::step_attractor)
        .def("path_integrate", &PoseCellGrid::path_integrate, py::arg("odom"))
        .def("inject", &PoseCellGrid::inject, py::arg("at"), py::arg("energy"))
        .def("decode", &PoseCellGrid::decode)
        .def("total_activity", &PoseCellGrid::total_activity)
        .def("pose_to_cells", &PoseCellGrid::pose_to_cells, py::arg("pose"))
        .def("cells_to_pose", &PoseCellGrid::cells_to_pose, py::arg("cells"))
        .def_property_readonly("activity",
                               [](const PoseCellGrid& g) { return g.activity(); })
        .def_property_readonly("nx", &PoseCellGrid::nx)
        .def_property_readonly("ny", &PoseCellGrid::ny)
        .def_property_readonly("nth", &PoseCellGrid::nth);

    // Experience map pieces.
    py::class_<AteResult>(m, "AteResult")
        .def_readonly("rmse_position", &AteResult::rmse_position)
        .def_readonly("rmse_heading", &AteResult::rmse_heading);

    m.def("absolute_trajectory_error", &absolute_trajectory_error, py::arg("estimate"),
          py::arg("truth"));

    py::class_<LoopClosureEvent>(m, "LoopClosureEvent")
        .def_readonly("current_exp", &LoopClosureEvent::current_exp)
        .def_readonly("matched_exp", &LoopClosureEvent::matched_exp)
        .def_readonly("cycle", &LoopClosureEvent::cycle);

    py::class_<Experience>(m, "Experience")
        .def_readonly("id", &Experience::id)
        .def_readonly("view_id", &Experience::view_id)
        .def_readonly("tactile_id", &Experience::tactile_id)
        .def_readonly("map_pose", &Experience::map_pose)
        .def_readonly("odo_pose", &Experience::odo_pose)
        .def_readonly("cycle", &Experience::cycle);

    // Config + full runs.
    py::register_exception<ConfigError>(m, "ConfigErrorException");

    py::class_<Params>(m, "Params")
        .def(py::init<>())
        .def("set", &Params::set, py::arg("key"), py::arg("value"))
        .def_property(
            "seed", [](const Params& p) { return p.sim.seed; },
            [](Params& p, std::uint64_t s) { p.sim.seed = s; });

    m.def("load_config_file", &load_config_file, py::arg("path"));

    py::class_<RunReport>(m, "RunReport")
        .def_property_readonly("mode", [](const RunReport& r) { return mode_name(r.mode); })
        .def_readonly("seed", &RunReport::seed)
        .def_readonly("cycles", &RunReport::cycles)
        .def_readonly("view_template_count", &RunReport::view_template_count)
        .def_readonly("tactile_template_count", &RunReport::tactile_template_count)
        .def_readonly("loop_closures", &RunReport::loop_closures)
        .def_readonly("ate_before_relax", &RunReport::ate_before_relax)
        .def_readonly("ate_after_relax", &RunReport::ate_after_relax)
        .def_readonly("experiences", &RunReport::experiences);

    m.def(
        "run_slam",
        [](const std::string& mode, const Params& params, const std::string& record_path) {
            RunConfig config{to_mode(mode), params};
            if (record_path.empty()) return run_live(config);
            std::ofstream os(record_path);
            if (!os) throw std::runtime_error("cannot write sensor log: " + record_path);
            SensorLogWriter recorder(os, params.sim.camera.width, params.sim.camera.height);
            return run_live(config, &recorder);
        },
        py::arg("mode"), py::arg("params"), py::arg("record_path") = std::string());

    m.def(
        "replay_slam",
        [](const std::string& mode, const Params& params, const std::string& log_path) {
            RunConfig config{to_mode(mode), params};
            ReplaySource source(read_sensor_log_file(log_path));
            return run(config, source);
        },
        py::arg("mode"), py::arg("params"), py::arg("log_path"));

    m.def("report_to_string", &report_to_string, py::arg("report"));
    m.def("render_map_svg", &render_map_svg, py::arg("report"));
}
