#include "vitaslam/sensor_log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace vitaslam {

namespace {

void append_hexfloat(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, " %a", v);
    out += buf;
}

// Cursor-based field readers; all throw LogParseError with the line number.
struct Cursor {
    const char* p;
    int line;

    void skip_ws() {
        while (*p == ' ' || *p == '\t') ++p;
    }

    double read_double(const char* what) {
        skip_ws();
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) throw LogParseError(line, std::string("expected number for ") + what);
        p = end;
        return v;
    }

    long read_long(const char* what) {
        skip_ws();
        char* end = nullptr;
        const long v = std::strtol(p, &end, 10);
        if (end == p) throw LogParseError(line, std::string("expected integer for ") + what);
        p = end;
        return v;
    }

    bool at_end() {
        skip_ws();
        return *p == '\0';
    }
};

int hex_nibble(char c, int line) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw LogParseError(line, "invalid hex digit in image payload");
}

} // namespace

SensorLogWriter::SensorLogWriter(std::ostream& os, int width, int height)
    : os_(os), width_(width), height_(height) {
    os_ << "vitaslam-log 1 " << width << ' ' << height << '\n';
}

void SensorLogWriter::write(const SensorFrame& frame) {
    std::string line = "frame " + std::to_string(frame.cycle);
    append_hexfloat(line, frame.truth.x);
    append_hexfloat(line, frame.truth.y);
    append_hexfloat(line, frame.truth.theta);
    append_hexfloat(line, frame.odom.dforward);
    append_hexfloat(line, frame.odom.dtheta);
    for (double d : frame.whisk.deflections) append_hexfloat(line, d);
    line += ' ';
    line += std::to_string(frame.whisk.contacts.size());
    for (const WhiskerContact& c : frame.whisk.contacts) {
        line += ' ';
        line += std::to_string(c.whisker_id);
        append_hexfloat(line, c.point_head.x);
        append_hexfloat(line, c.point_head.y);
    }
    line += ' ';
    static const char* kHex = "0123456789abcdef";
    line.reserve(line.size() + frame.rgb.pixels.size() * 2 + 1);
    for (std::uint8_t b : frame.rgb.pixels) {
        line += kHex[b >> 4];
        line += kHex[b & 0xf];
    }
    line += '\n';
    os_ << line;
}

void write_sensor_log(std::ostream& os, const std::vector<SensorFrame>& frames,
                      int width, int height) {
    SensorLogWriter writer(os, width, height);
    for (const SensorFrame& f : frames) writer.write(f);
}

std::vector<SensorFrame> read_sensor_log(std::istream& in) {
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw LogParseError(1, "missing header");
    ++line_no;
    int width = 0, height = 0, version = 0;
    {
        std::istringstream hs(line);
        std::string magic;
        if (!(hs >> magic >> version >> width >> height) || magic != "vitaslam-log") {
            throw LogParseError(line_no, "bad header, expected 'vitaslam-log 1 <w> <h>'");
        }
        if (version != 1) throw LogParseError(line_no, "unsupported log version");
        if (width <= 0 || height <= 0) throw LogParseError(line_no, "bad image dimensions");
    }
    const std::size_t payload = static_cast<std::size_t>(width) * height * 3;

    std::vector<SensorFrame> frames;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("frame ", 0) != 0) {
            throw LogParseError(line_no, "expected a 'frame' record");
        }
        Cursor cur{line.c_str() + 6, line_no};

        SensorFrame f;
        f.cycle = static_cast<int>(cur.read_long("cycle"));
        f.truth.x = cur.read_double("truth.x");
        f.truth.y = cur.read_double("truth.y");
        f.truth.theta = cur.read_double("truth.theta");
        f.odom.dforward = cur.read_double("odom.dforward");
        f.odom.dtheta = cur.read_double("odom.dtheta");
        for (int i = 0; i < kWhiskerCount; ++i) {
            f.whisk.deflections[static_cast<std::size_t>(i)] = cur.read_double("deflection");
        }
        const long n_contacts = cur.read_long("contact count");
        if (n_contacts < 0 || n_contacts > kWhiskerCount) {
            throw LogParseError(line_no, "contact count out of range");
        }
        for (long i = 0; i < n_contacts; ++i) {
            WhiskerContact c;
            c.whisker_id = static_cast<int>(cur.read_long("whisker id"));
            c.point_head.x = cur.read_double("contact.x");
            c.point_head.y = cur.read_double("contact.y");
            f.whisk.contacts.push_back(c);
        }

        cur.skip_ws();
        const std::size_t hex_len = std::strlen(cur.p);
        if (hex_len != payload * 2) {
            throw LogParseError(line_no, "image payload has wrong length");
        }
        f.rgb.width = width;
        f.rgb.height = height;
        f.rgb.pixels.resize(payload);
        for (std::size_t i = 0; i < payload; ++i) {
            f.rgb.pixels[i] = static_cast<std::uint8_t>(
                (hex_nibble(cur.p[2 * i], line_no) << 4) | hex_nibble(cur.p[2 * i + 1], line_no));
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

std::vector<SensorFrame> read_sensor_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sensor log: " + path);
    return read_sensor_log(in);
}

} // namespace vitaslam
