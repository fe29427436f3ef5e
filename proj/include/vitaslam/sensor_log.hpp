#ifndef VITASLAM_SENSOR_LOG_HPP
#define VITASLAM_SENSOR_LOG_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vitaslam/simulator.hpp"

namespace vitaslam {

struct LogParseError : std::runtime_error {
    LogParseError(int line_arg, const std::string& message)
        : std::runtime_error("sensor log line " + std::to_string(line_arg) + ": " + message),
          line(line_arg) {}
    int line;
};

// Line-delimited sensor log. One header line
//   vitaslam-log 1 <width> <height>
// then one line per frame:
//   frame <cycle> <truth x y theta> <odom df dth> <24 deflections>
//         <n> (<whisker_id> <contact x y>)*n <hex rgb payload>
// All doubles are printed as C hexfloats so replay is bit-exact.
class SensorLogWriter {
public:
    SensorLogWriter(std::ostream& os, int width, int height);
    void write(const SensorFrame& frame);

private:
    std::ostream& os_;
    int width_;
    int height_;
};

void write_sensor_log(std::ostream& os, const std::vector<SensorFrame>& frames,
                      int width, int height);

/// Parse a full log. Malformed or truncated input raises LogParseError with
/// the offending 1-based line number.
std::vector<SensorFrame> read_sensor_log(std::istream& in);

std::vector<SensorFrame> read_sensor_log_file(const std::string& path);

} // namespace vitaslam

#endif
