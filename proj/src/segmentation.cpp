#include "cgvc/segmentation.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cgvc/errors.hpp"

namespace cgvc {

namespace {

std::string frame_file_name(int t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.pgm", t);
    return buf;
}

Plane read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw InputError(path + ": not a P5 PGM");
    auto next_int = [&in, &path]() {
        // skip whitespace and '#' comment lines
        int c;
        while ((c = in.peek()) != EOF) {
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        int v;
        if (!(in >> v)) throw InputError(path + ": malformed PGM header");
        return v;
    };
    int w = next_int();
    int h = next_int();
    int maxval = next_int();
    if (maxval != 255) throw InputError(path + ": PGM maxval must be 255");
    in.get();  // single whitespace before payload
    Plane p(w, h);
    in.read(reinterpret_cast<char*>(p.data.data()),
            static_cast<std::streamsize>(p.size()));
    if (static_cast<size_t>(in.gcount()) != p.size())
        throw TruncatedInput(path + ": truncated PGM payload");
    return p;
}

}  // namespace

std::vector<LabelMap> load_label_maps(const std::string& dir, const VideoMeta& meta) {
    std::vector<LabelMap> maps;
    maps.reserve(meta.frame_count);
    for (int t = 1; t <= meta.frame_count; ++t) {
        std::filesystem::path p = std::filesystem::path(dir) / frame_file_name(t);
        if (!std::filesystem::exists(p)) throw MissingLabelMap(t);
        LabelMap m;
        m.index = t;
        m.labels = read_pgm(p.string());
        if (m.labels.w != meta.width || m.labels.h != meta.height)
            throw InputError(p.string() + ": label map dimensions " +
                             std::to_string(m.labels.w) + "x" +
                             std::to_string(m.labels.h) + " do not match video");
        maps.push_back(std::move(m));
    }
    // renumber to contiguous 1..M in first-appearance order
    std::array<int, 256> remap{};
    remap.fill(-1);
    remap[0] = 0;
    int next_id = 1;
    for (LabelMap& m : maps)
        for (uint8_t& px : m.labels.data) {
            if (remap[px] < 0) remap[px] = next_id++;
            px = static_cast<uint8_t>(remap[px]);
        }
    if (next_id > 256)
        throw InputError(dir + ": more than 255 distinct object ids");
    return maps;
}

std::vector<LabelMap> whole_frame_segmentation(const VideoMeta& meta) {
    std::vector<LabelMap> maps;
    maps.reserve(meta.frame_count);
    for (int t = 1; t <= meta.frame_count; ++t)
        maps.push_back({t, Plane(meta.width, meta.height, 1)});
    return maps;
}

std::vector<LabelMap> grid_segmentation(const VideoMeta& meta, int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols > 255)
        throw InputError("grid segmentation requires 1 <= rows*cols <= 255");
    Plane labels(meta.width, meta.height);
    for (int y = 0; y < meta.height; ++y) {
        int gr = std::min(rows - 1, y * rows / meta.height);
        for (int x = 0; x < meta.width; ++x) {
            int gc = std::min(cols - 1, x * cols / meta.width);
            labels.at(x, y) = static_cast<uint8_t>(gr * cols + gc + 1);
        }
    }
    std::vector<LabelMap> maps;
    maps.reserve(meta.frame_count);
    for (int t = 1; t <= meta.frame_count; ++t) maps.push_back({t, labels});
    return maps;
}

int count_objects(const std::vector<LabelMap>& maps) {
    int m = 0;
    for (const LabelMap& lm : maps)
        for (uint8_t px : lm.labels.data) m = std::max<int>(m, px);
    return m;
}

void write_label_maps(const std::vector<LabelMap>& maps, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const LabelMap& m : maps) {
        std::filesystem::path p = std::filesystem::path(dir) / frame_file_name(m.index);
        std::ofstream out(p, std::ios::binary);
        out << "P5\n" << m.labels.w << " " << m.labels.h << "\n255\n";
        out.write(reinterpret_cast<const char*>(m.labels.data.data()),
                  static_cast<std::streamsize>(m.labels.size()));
        if (!out) throw InputError("I/O failure writing " + p.string());
    }
}

}  // namespace cgvc
