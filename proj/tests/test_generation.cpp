#include <filesystem>
#include <fstream>

#include "cgvc/errors.hpp"
#include "cgvc/generation.hpp"
#include "doctest.h"

using namespace cgvc;

namespace {

ClipGenRequest blend_request(int span_first, int span_last, uint8_t uf, uint8_t ul,
                             uint8_t vf = 128, uint8_t vl = 128) {
    VideoMeta meta{4, 4, 1, {25, 1}};
    ClipGenRequest req;
    req.span_first = span_first;
    req.span_last = span_last;
    req.first_kf = make_frame(meta, span_first, 100, uf, vf);
    req.last_kf = make_frame(meta, span_last, 100, ul, vl);
    for (int t = span_first + 1; t < span_last; ++t) {
        PriorFrame p;
        p.index = t;
        p.plane = Plane(4, 4, static_cast<uint8_t>(40 + t));
        req.priors.push_back(p);
    }
    return req;
}

}  // namespace

TEST_CASE("baseline: luma passes through, chroma is the midpoint blend") {
    auto req = blend_request(1, 3, 100, 200);
    auto out = baseline_generate(req);
    REQUIRE(out.size() == 1);
    CHECK(out[0].index == 2);
    CHECK(out[0].y.data == std::vector<uint8_t>(16, 42));
    CHECK(out[0].u.data == std::vector<uint8_t>(4, 150));
    CHECK(out[0].v.data == std::vector<uint8_t>(4, 128));
}

TEST_CASE("baseline: span (1,5) at t=2 blends V 0/255 to 64") {
    auto req = blend_request(1, 5, 128, 128, 0, 255);
    auto out = baseline_generate(req);
    REQUIRE(out.size() == 3);
    CHECK(out[0].v.data == std::vector<uint8_t>(4, 64));   // round(255/4)
    CHECK(out[1].v.data == std::vector<uint8_t>(4, 128));  // round(510/4)
    CHECK(out[2].v.data == std::vector<uint8_t>(4, 191));  // round(765/4)
}

TEST_CASE("baseline: identical keyframes give constant chroma") {
    auto req = blend_request(10, 14, 77, 77, 203, 203);
    for (const auto& f : baseline_generate(req)) {
        CHECK(f.u.data == std::vector<uint8_t>(4, 77));
        CHECK(f.v.data == std::vector<uint8_t>(4, 203));
    }
}

TEST_CASE("baseline rejects prior/span mismatches") {
    auto req = blend_request(1, 5, 0, 0);
    req.priors.pop_back();
    CHECK_THROWS_AS(baseline_generate(req), InputError);
    auto req2 = blend_request(1, 3, 0, 0);
    req2.priors[0].kind = PriorKind::Edge;
    CHECK_THROWS_AS(baseline_generate(req2), InputError);
}

TEST_CASE("external generator: copy-through script emits priors as luma") {
    auto req = blend_request(1, 4, 90, 110);
    // the fake generator promotes priors.y4m to out.y4m untouched
    auto out = external_generate(req, "cp {workdir}/priors.y4m {workdir}/out.y4m");
    REQUIRE(out.size() == 2);
    for (size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].y == req.priors[i].plane);
        CHECK(out[i].u.data == std::vector<uint8_t>(4, 128));
    }
}

TEST_CASE("external generator failure modes") {
    auto req = blend_request(1, 4, 90, 110);
    CHECK_THROWS_AS(external_generate(req, "false # {workdir}"), GeneratorFailed);
    // wrong frame count in out.y4m
    CHECK_THROWS_AS(
        external_generate(req, "cp {workdir}/first.y4m {workdir}/out.y4m"),
        GeneratorOutputMismatch);
    // command that succeeds but writes nothing
    CHECK_THROWS_AS(external_generate(req, "true # {workdir}"),
                    GeneratorOutputMismatch);
}
