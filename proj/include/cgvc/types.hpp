#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cgvc {

struct Rational {
    uint32_t num = 25;
    uint32_t den = 1;
    double as_double() const { return static_cast<double>(num) / den; }
};

enum class PixelFormat : uint8_t { YUV420P8 = 0 };

struct VideoMeta {
    int width = 0;   // even
    int height = 0;  // even
    int frame_count = 0;
    Rational fps;
    PixelFormat pixel_format = PixelFormat::YUV420P8;

    bool valid() const {
        return width > 0 && height > 0 && width % 2 == 0 && height % 2 == 0 &&
               frame_count >= 1 && fps.num > 0 && fps.den > 0;
    }
    size_t frame_bytes() const {
        return static_cast<size_t>(width) * height * 3 / 2;
    }
};

struct Plane {
    int w = 0;
    int h = 0;
    std::vector<uint8_t> data;

    Plane() = default;
    Plane(int w_, int h_, uint8_t fill = 0)
        : w(w_), h(h_), data(static_cast<size_t>(w_) * h_, fill) {}

    uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * w + x]; }
    uint8_t& at(int x, int y) { return data[static_cast<size_t>(y) * w + x]; }
    size_t size() const { return data.size(); }

    bool operator==(const Plane&) const = default;
};

// One 4:2:0 picture. Frame indices are 1-based throughout.
struct Frame {
    int index = 0;
    Plane y, u, v;

    bool operator==(const Frame&) const = default;
};

struct RgbFrame {
    int index = 0;
    Plane r, g, b;

    bool operator==(const RgbFrame&) const = default;
};

inline Frame make_frame(const VideoMeta& meta, int index, uint8_t yv = 16,
                        uint8_t uv = 128, uint8_t vv = 128) {
    Frame f;
    f.index = index;
    f.y = Plane(meta.width, meta.height, yv);
    f.u = Plane(meta.width / 2, meta.height / 2, uv);
    f.v = Plane(meta.width / 2, meta.height / 2, vv);
    return f;
}

}  // namespace cgvc
