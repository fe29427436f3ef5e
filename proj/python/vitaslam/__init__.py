"""Visuo-tactile SLAM testbed: attractor pose cells, whisker templates, experience map."""

from ._core import (
    AteResult,
    CellCoords,
    ConfigErrorException,
    DegenerateActivityError,
    Experience,
    LoopClosureEvent,
    Params,
    Point2,
    Pose,
    PoseCellGrid,
    PoseEstimate,
    RgbImage,
    RunReport,
    Twist,
    absolute_trajectory_error,
    apply_twist,
    best_shift_distance,
    between,
    compose,
    compute_pfh,
    compute_sda,
    estimate_normals,
    extract_view_profile,
    inverse,
    load_config_file,
    render_map_svg,
    replay_slam,
    report_to_string,
    run_slam,
    transform_point,
    wrap_angle,
)

__all__ = [
    "AteResult",
    "CellCoords",
    "ConfigErrorException",
    "DegenerateActivityError",
    "Experience",
    "LoopClosureEvent",
    "Params",
    "Point2",
    "Pose",
    "PoseCellGrid",
    "PoseEstimate",
    "RgbImage",
    "RunReport",
    "Twist",
    "absolute_trajectory_error",
    "apply_twist",
    "best_shift_distance",
    "between",
    "compose",
    "compute_pfh",
    "compute_sda",
    "estimate_normals",
    "extract_view_profile",
    "inverse",
    "load_config_file",
    "render_map_svg",
    "replay_slam",
    "report_to_string",
    "run_slam",
    "transform_point",
    "wrap_angle",
]
