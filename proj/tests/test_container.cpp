#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "cgvc/container.hpp"
#include "cgvc/errors.hpp"
#include "doctest.h"

using namespace cgvc;

namespace {

CgvcContainer minimal_container() {
    CgvcContainer c;
    c.meta = {2, 2, 2, {25, 1}};
    c.plan.keyframes = {1, 2};
    c.codec_id = 1;
    VideoMeta meta = c.meta;
    c.b_k = encode_stream({make_frame(meta, 1), make_frame(meta, 2)}, {}, meta.fps);
    c.b_p = EncodedStream{};  // no interior frames
    c.b_p.codec_id = 1;
    c.b_p.width = meta.width;
    c.b_p.height = meta.height;
    RgbFrame black;
    black.r = Plane(2, 2, 0);
    black.g = Plane(2, 2, 0);
    black.b = Plane(2, 2, 0);
    black.index = 1;
    RgbFrame black2 = black;
    black2.index = 2;
    c.b_c = compute_color_params({black, black2});
    return c;
}

CgvcContainer random_container(uint32_t seed) {
    std::mt19937 rng(seed);
    CgvcContainer c;
    c.meta = {8, 6, 9, {30000, 1001}};
    c.plan.keyframes = {1, 5, 9};
    c.prior_kind = rng() % 2 ? PriorKind::Edge : PriorKind::Luma;
    c.codec_id = 1;
    auto rand_stream = [&](int frames) {
        EncodedStream s;
        s.codec_id = 1;
        s.frame_count = frames;
        s.width = 8;
        s.height = 6;
        s.bytes.resize(rng() % 400 + 1);
        for (uint8_t& b : s.bytes) b = static_cast<uint8_t>(rng());
        return s;
    };
    c.b_k = rand_stream(3);
    c.b_p = rand_stream(6);
    c.b_c.frames.resize(9);
    for (auto& fr : c.b_c.frames)
        for (auto& ch : fr) {
            ch.mu = rng();
            ch.sigma = rng();
        }
    return c;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (uint8_t b : bytes) {
        s += digits[b >> 4];
        s += digits[b & 15];
    }
    return s;
}

}  // namespace

TEST_CASE("minimal container matches the frozen golden bytes") {
    auto bytes = serialize(minimal_container());
    std::ifstream in(std::string(TEST_DATA_DIR) + "/minimal_container.hex");
    REQUIRE(in.good());
    std::string expected;
    in >> expected;
    CHECK(to_hex(bytes) == expected);
}

TEST_CASE("container header starts with magic and version") {
    auto bytes = serialize(minimal_container());
    REQUIRE(bytes.size() > 8);
    CHECK(std::memcmp(bytes.data(), "CGVC", 4) == 0);
    CHECK(bytes[4] == 1);  // version, little-endian u16
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == 4);  // section count
    CHECK(bytes[7] == 0);
}

TEST_CASE("round trip of randomly populated containers") {
    for (uint32_t seed : {1u, 2u, 3u, 4u}) {
        auto c = random_container(seed);
        auto back = parse(serialize(c));
        CHECK(back == c);
    }
}

TEST_CASE("corruption detection") {
    auto c = minimal_container();
    auto good = serialize(c);

    SUBCASE("bad magic") {
        auto bytes = good;
        bytes[0] = 'X';
        CHECK_THROWS_AS(parse(bytes), BadMagic);
    }
    SUBCASE("unsupported version") {
        auto bytes = good;
        bytes[4] = 9;
        CHECK_THROWS_AS(parse(bytes), UnsupportedVersion);
    }
    SUBCASE("truncation at every prefix length is detected") {
        for (size_t len : {size_t(3), size_t(7), good.size() / 2, good.size() - 1}) {
            auto bytes = good;
            bytes.resize(len);
            CHECK_THROWS_AS(parse(bytes), CorruptStream);
        }
    }
    SUBCASE("payload bit flip fails the section CRC") {
        auto bytes = good;
        bytes[bytes.size() - 3] ^= 0x40;
        CHECK_THROWS_AS(parse(bytes), CrcMismatch);
    }
    SUBCASE("keyframe index past the frame count") {
        auto bad = c;
        bad.plan.keyframes = {1, 5};
        CHECK_THROWS_AS(parse(serialize(bad)), PlanOutOfRange);
    }
    SUBCASE("stream frame counts must match the plan") {
        auto bad = c;
        bad.b_k.frame_count = 3;
        CHECK_THROWS_AS(parse(serialize(bad)), PlanStreamMismatch);
    }
    SUBCASE("color params must cover every frame") {
        auto bad = c;
        bad.b_c.frames.resize(1);
        CHECK_THROWS_AS(parse(serialize(bad)), CorruptStream);
    }
}

TEST_CASE("B_C payload size: 24 bytes per frame plus framing") {
    auto c = random_container(9);
    c.b_c.frames.resize(100);
    auto with = serialize(c).size();
    c.b_c.frames.resize(0);
    // frame count mismatch would fail parse, but serialize is layout-only
    auto without = serialize(c).size();
    CHECK(with - without == 100 * 24);
}

TEST_CASE("rate breakdown components sum to the total") {
    auto c = random_container(5);
    auto r = total_rate(c);
    CHECK(r.total_kbps ==
          doctest::Approx(r.b_k_kbps + r.b_p_kbps + r.b_c_kbps + r.overhead_kbps));
    double fps = c.meta.fps.as_double();
    CHECK(r.b_k_kbps == doctest::Approx(8.0 * c.b_k.bytes.size() * fps /
                                        c.meta.frame_count / 1000.0));
    CHECK(r.total_kbps == doctest::Approx(8.0 * serialize(c).size() * fps /
                                          c.meta.frame_count / 1000.0));
}
