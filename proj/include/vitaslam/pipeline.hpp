#ifndef VITASLAM_PIPELINE_HPP
#define VITASLAM_PIPELINE_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "vitaslam/config.hpp"
#include "vitaslam/experience_map.hpp"
#include "vitaslam/sensor_log.hpp"
#include "vitaslam/simulator.hpp"

namespace vitaslam {

enum class Mode { VisualOnly, Vita };

std::string mode_name(Mode mode);

// Where frames come from: the live simulator or a recorded log. Replay must
// reproduce a recorded stream bit-exactly, which the hexfloat log format
// guarantees.
struct FrameSource {
    virtual ~FrameSource() = default;
    virtual int total_cycles() const = 0;
    virtual SensorFrame frame(int cycle) = 0;
};

class SimulatorSource : public FrameSource {
public:
    explicit SimulatorSource(const SimulatorConfig& config) : sim_(config) {}
    int total_cycles() const override { return sim_.total_cycles(); }
    SensorFrame frame(int cycle) override { return sim_.frame(cycle); }
    const Simulator& simulator() const { return sim_; }

private:
    Simulator sim_;
};

class ReplaySource : public FrameSource {
public:
    explicit ReplaySource(std::vector<SensorFrame> frames) : frames_(std::move(frames)) {}
    int total_cycles() const override { return static_cast<int>(frames_.size()); }
    SensorFrame frame(int cycle) override {
        return frames_.at(static_cast<std::size_t>(cycle));
    }

private:
    std::vector<SensorFrame> frames_;
};

struct RunConfig {
    Mode mode = Mode::Vita;
    Params params;
};

struct TraceRow {
    int cycle = 0;
    Pose truth;
    Pose decoded;
    int active_experience = -1;
};

struct TemplateGrowthRow {
    int cycle = 0;
    int view_count = 0;
    int tactile_count = 0;
};

struct RunReport {
    Mode mode = Mode::Vita;
    std::uint64_t seed = 0;
    int cycles = 0;
    int view_template_count = 0;
    int tactile_template_count = 0;
    std::vector<LoopClosureEvent> loop_closures;
    AteResult ate_before_relax; // zeros when the map has fewer than 2 nodes
    AteResult ate_after_relax;
    std::vector<TraceRow> trace;
    std::vector<TemplateGrowthRow> template_growth;
    std::vector<Experience> experiences;
    std::vector<Link> links;
};

struct PipelineError : std::runtime_error {
    PipelineError(int cycle_arg, const std::string& message)
        : std::runtime_error("cycle " + std::to_string(cycle_arg) + ": " + message),
          cycle(cycle_arg) {}
    int cycle;
};

/// Run the full loop over the frame source: preprocess both modalities,
/// match, path-integrate, inject matches, settle the attractor, decode,
/// update the experience map, relax on loop closures and once at the end.
/// In visual-only mode whisking still happens (sensor parity) but tactile
/// matching and injection are skipped. An optional recorder captures the
/// consumed frames as a sensor log.
RunReport run(const RunConfig& config, FrameSource& source,
              SensorLogWriter* recorder = nullptr);

/// Convenience: run against the live simulator described by the params.
RunReport run_live(const RunConfig& config, SensorLogWriter* recorder = nullptr);

struct ComparisonReport {
    RunReport a;
    RunReport b;
};

/// Paired runs on identical frame streams. Seeds must match and modes must
/// differ, otherwise ConfigError.
ComparisonReport compare(const RunConfig& a, const RunConfig& b);

/// Canonical serialization with hexfloat doubles; equal strings mean
/// bit-identical reports.
std::string report_to_string(const RunReport& report);

void write_report_csv(std::ostream& os, const RunReport& report);
void write_trace_csv(std::ostream& os, const RunReport& report);
void write_templates_csv(std::ostream& os, const RunReport& report);
void write_comparison_csv(std::ostream& os, const ComparisonReport& cmp);

} // namespace vitaslam

#endif
