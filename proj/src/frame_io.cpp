#include "cgvc/frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cgvc/errors.hpp"

namespace cgvc {

namespace {

// BT.709 constants, limited range.
constexpr double kKr = 0.2126;
constexpr double kKb = 0.0722;
constexpr double kKg = 1.0 - kKr - kKb;

uint8_t clamp_round(double v) {
    long r = std::lround(v);  // half away from zero
    if (r < 0) return 0;
    if (r > 255) return 255;
    return static_cast<uint8_t>(r);
}

void check_frame_dims(const Frame& f, const VideoMeta& meta) {
    if (f.y.w != meta.width || f.y.h != meta.height ||
        f.u.w != meta.width / 2 || f.u.h != meta.height / 2 ||
        f.v.w != meta.width / 2 || f.v.h != meta.height / 2) {
        throw InputError("frame " + std::to_string(f.index) +
                         " has inconsistent plane dimensions");
    }
}

VideoMeta parse_y4m_header(const std::string& line) {
    VideoMeta meta;
    meta.frame_count = 0;
    std::istringstream iss(line);
    std::string tok;
    iss >> tok;
    if (tok != "YUV4MPEG2") throw InputError("not a YUV4MPEG2 stream");
    while (iss >> tok) {
        if (tok.empty()) continue;
        char tag = tok[0];
        std::string val = tok.substr(1);
        switch (tag) {
            case 'W': meta.width = std::stoi(val); break;
            case 'H': meta.height = std::stoi(val); break;
            case 'F': {
                auto colon = val.find(':');
                if (colon == std::string::npos)
                    throw InputError("malformed Y4M frame rate: " + val);
                meta.fps.num = static_cast<uint32_t>(std::stoul(val.substr(0, colon)));
                meta.fps.den = static_cast<uint32_t>(std::stoul(val.substr(colon + 1)));
                break;
            }
            case 'C':
                if (val != "420" && val != "420jpeg" && val != "420mpeg2")
                    throw InputError("unsupported Y4M chroma mode: " + val);
                break;
            default: break;  // interlace, aspect, extensions: ignored
        }
    }
    if (meta.width <= 0 || meta.height <= 0)
        throw InputError("Y4M header missing dimensions");
    return meta;
}

Frame read_frame_payload(std::istream& in, const VideoMeta& meta, int index) {
    Frame f;
    f.index = index;
    f.y = Plane(meta.width, meta.height);
    f.u = Plane(meta.width / 2, meta.height / 2);
    f.v = Plane(meta.width / 2, meta.height / 2);
    for (Plane* p : {&f.y, &f.u, &f.v}) {
        in.read(reinterpret_cast<char*>(p->data.data()),
                static_cast<std::streamsize>(p->size()));
        if (static_cast<size_t>(in.gcount()) != p->size())
            throw TruncatedInput("truncated frame " + std::to_string(index));
    }
    return f;
}

}  // namespace

std::pair<VideoMeta, std::vector<Frame>> read_video(
    const std::string& path, const std::optional<VideoMeta>& meta_opt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);

    char magic[9] = {};
    in.read(magic, 9);
    bool is_y4m = in.gcount() == 9 && std::memcmp(magic, "YUV4MPEG2", 9) == 0;
    in.clear();
    in.seekg(0);

    std::vector<Frame> frames;
    VideoMeta meta;
    if (is_y4m) {
        std::string header;
        std::getline(in, header);
        meta = parse_y4m_header(header);
        if (meta.width % 2 || meta.height % 2)
            throw InputError("odd dimensions in " + path);
        std::string frame_line;
        int t = 0;
        while (std::getline(in, frame_line)) {
            if (frame_line.rfind("FRAME", 0) != 0)
                throw InputError("expected FRAME marker in " + path);
            frames.push_back(read_frame_payload(in, meta, ++t));
        }
        if (frames.empty()) throw TruncatedInput("no frames in " + path);
        meta.frame_count = t;
    } else {
        if (!meta_opt)
            throw InputError("raw YUV input requires explicit meta: " + path);
        meta = *meta_opt;
        if (meta.width <= 0 || meta.height <= 0 || meta.width % 2 || meta.height % 2)
            throw InputError("invalid or odd dimensions for raw input");
        in.seekg(0, std::ios::end);
        auto file_size = static_cast<size_t>(in.tellg());
        in.seekg(0);
        size_t fsz = meta.frame_bytes();
        if (file_size == 0 || file_size % fsz != 0)
            throw TruncatedInput(path + ": size " + std::to_string(file_size) +
                                 " is not a multiple of frame size " +
                                 std::to_string(fsz));
        int t_total = static_cast<int>(file_size / fsz);
        if (meta.frame_count > 0 && meta.frame_count != t_total)
            throw TruncatedInput(path + ": expected " +
                                 std::to_string(meta.frame_count) + " frames, file holds " +
                                 std::to_string(t_total));
        for (int t = 1; t <= t_total; ++t)
            frames.push_back(read_frame_payload(in, meta, t));
        meta.frame_count = t_total;
    }
    return {meta, std::move(frames)};
}

void write_video(const std::vector<Frame>& frames, const std::string& path,
                 VideoFormat format, const VideoMeta& meta) {
    if (frames.empty()) throw InputError("refusing to write empty video");
    for (const Frame& f : frames) check_frame_dims(f, meta);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open " + path + " for writing");
    if (format == VideoFormat::Y4M) {
        out << "YUV4MPEG2 W" << meta.width << " H" << meta.height << " F"
            << meta.fps.num << ":" << meta.fps.den << " Ip A1:1 C420\n";
    }
    for (const Frame& f : frames) {
        if (format == VideoFormat::Y4M) out << "FRAME\n";
        for (const Plane* p : {&f.y, &f.u, &f.v})
            out.write(reinterpret_cast<const char*>(p->data.data()),
                      static_cast<std::streamsize>(p->size()));
    }
    if (!out) throw InputError("I/O failure writing " + path);
}

RgbFrame yuv_to_rgb(const Frame& frame) {
    RgbFrame out;
    out.index = frame.index;
    const int w = frame.y.w, h = frame.y.h;
    out.r = Plane(w, h);
    out.g = Plane(w, h);
    out.b = Plane(w, h);
    for (int yy = 0; yy < h; ++yy) {
        for (int xx = 0; xx < w; ++xx) {
            double yv = (frame.y.at(xx, yy) - 16.0) * 255.0 / 219.0;
            double pb = (frame.u.at(xx / 2, yy / 2) - 128.0) * 255.0 / 224.0;
            double pr = (frame.v.at(xx / 2, yy / 2) - 128.0) * 255.0 / 224.0;
            double r = yv + 2.0 * (1.0 - kKr) * pr;
            double b = yv + 2.0 * (1.0 - kKb) * pb;
            double g = yv - (2.0 * kKr * (1.0 - kKr) / kKg) * pr -
                       (2.0 * kKb * (1.0 - kKb) / kKg) * pb;
            out.r.at(xx, yy) = clamp_round(r);
            out.g.at(xx, yy) = clamp_round(g);
            out.b.at(xx, yy) = clamp_round(b);
        }
    }
    return out;
}

Frame rgb_to_yuv(const RgbFrame& rgb) {
    Frame out;
    out.index = rgb.index;
    const int w = rgb.r.w, h = rgb.r.h;
    out.y = Plane(w, h);
    out.u = Plane(w / 2, h / 2);
    out.v = Plane(w / 2, h / 2);
    std::vector<double> ub(static_cast<size_t>(w) * h), vb(static_cast<size_t>(w) * h);
    for (int yy = 0; yy < h; ++yy) {
        for (int xx = 0; xx < w; ++xx) {
            double r = rgb.r.at(xx, yy), g = rgb.g.at(xx, yy), b = rgb.b.at(xx, yy);
            double yfull = kKr * r + kKg * g + kKb * b;
            out.y.at(xx, yy) = clamp_round(16.0 + 219.0 * yfull / 255.0);
            double pb = (b - yfull) / (2.0 * (1.0 - kKb));
            double pr = (r - yfull) / (2.0 * (1.0 - kKr));
            ub[static_cast<size_t>(yy) * w + xx] = 128.0 + 224.0 * pb / 255.0;
            vb[static_cast<size_t>(yy) * w + xx] = 128.0 + 224.0 * pr / 255.0;
        }
    }
    for (int cy = 0; cy < h / 2; ++cy) {
        for (int cx = 0; cx < w / 2; ++cx) {
            double us = 0, vs = 0;
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx) {
                    size_t i = static_cast<size_t>(2 * cy + dy) * w + 2 * cx + dx;
                    us += ub[i];
                    vs += vb[i];
                }
            out.u.at(cx, cy) = clamp_round(us / 4.0);
            out.v.at(cx, cy) = clamp_round(vs / 4.0);
        }
    }
    return out;
}

std::vector<RgbFrame> to_rgb(const std::vector<Frame>& frames) {
    std::vector<RgbFrame> out;
    out.reserve(frames.size());
    for (const Frame& f : frames) out.push_back(yuv_to_rgb(f));
    return out;
}

}  // namespace cgvc
