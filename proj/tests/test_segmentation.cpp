#include <filesystem>
#include <fstream>

#include "cgvc/errors.hpp"
#include "cgvc/segmentation.hpp"
#include "doctest.h"

using namespace cgvc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_pgm(const fs::path& path, int w, int h,
               const std::vector<uint8_t>& px) {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(px.data()),
              static_cast<std::streamsize>(px.size()));
}

}  // namespace

TEST_CASE("whole-frame segmentation labels everything 1") {
    VideoMeta meta{4, 4, 3, {25, 1}};
    auto maps = whole_frame_segmentation(meta);
    REQUIRE(maps.size() == 3);
    CHECK(count_objects(maps) == 1);
    for (const auto& m : maps)
        for (uint8_t px : m.labels.data) CHECK(px == 1);
}

TEST_CASE("grid segmentation: equal pixel counts when dimensions divide") {
    VideoMeta meta{8, 8, 1, {25, 1}};
    auto maps = grid_segmentation(meta, 2, 2);
    REQUIRE(maps.size() == 1);
    CHECK(count_objects(maps) == 4);
    std::array<int, 5> counts{};
    for (uint8_t px : maps[0].labels.data) {
        REQUIRE(px >= 1);
        REQUIRE(px <= 4);
        ++counts[px];
    }
    for (int id = 1; id <= 4; ++id) CHECK(counts[id] == 16);
    // row-major id order: top-left block is 1, top-right 2
    CHECK(maps[0].labels.at(0, 0) == 1);
    CHECK(maps[0].labels.at(7, 0) == 2);
    CHECK(maps[0].labels.at(0, 7) == 3);
    CHECK(maps[0].labels.at(7, 7) == 4);
}

TEST_CASE("mask loading renumbers ids by first appearance") {
    auto dir = temp_dir("cgvc_masks");
    VideoMeta meta{2, 2, 2, {25, 1}};
    // frame 1 uses ids {0, 7}; frame 2 introduces 3 -> renumbered to 2
    write_pgm(dir / "frame_000001.pgm", 2, 2, {0, 7, 7, 0});
    write_pgm(dir / "frame_000002.pgm", 2, 2, {3, 7, 3, 0});
    auto maps = load_label_maps(dir.string(), meta);
    REQUIRE(maps.size() == 2);
    CHECK(maps[0].labels.data == std::vector<uint8_t>{0, 1, 1, 0});
    CHECK(maps[1].labels.data == std::vector<uint8_t>{2, 1, 2, 0});
    CHECK(count_objects(maps) == 2);
    fs::remove_all(dir);
}

TEST_CASE("missing or mismatched masks are rejected") {
    auto dir = temp_dir("cgvc_masks_bad");
    VideoMeta meta{2, 2, 2, {25, 1}};
    write_pgm(dir / "frame_000001.pgm", 2, 2, {0, 1, 1, 0});
    CHECK_THROWS_AS(load_label_maps(dir.string(), meta), MissingLabelMap);

    write_pgm(dir / "frame_000002.pgm", 4, 2, {0, 1, 1, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(load_label_maps(dir.string(), meta), InputError);
    fs::remove_all(dir);
}

TEST_CASE("mask write/load round trip") {
    auto dir = temp_dir("cgvc_masks_rt");
    VideoMeta meta{4, 2, 2, {25, 1}};
    auto maps = grid_segmentation(meta, 1, 2);
    write_label_maps(maps, dir.string());
    auto back = load_label_maps(dir.string(), meta);
    REQUIRE(back.size() == maps.size());
    for (size_t i = 0; i < maps.size(); ++i)
        CHECK(back[i].labels == maps[i].labels);
    fs::remove_all(dir);
}
