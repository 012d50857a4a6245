#include "cgvc/container.hpp"

#include <zlib.h>

#include <cstring>

#include "cgvc/errors.hpp"

namespace cgvc {

namespace {

constexpr char kMagic[4] = {'C', 'G', 'V', 'C'};
constexpr int kSectionCount = 4;
const char* kSectionNames[kSectionCount] = {"HEADER", "B_K", "B_P", "B_C"};

uint32_t crc_of(const std::vector<uint8_t>& bytes) {
    return static_cast<uint32_t>(
        ::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back(v >> 8);
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

struct Reader {
    const uint8_t* p;
    size_t len;
    size_t pos = 0;
    const char* section;

    uint8_t u8() {
        if (pos + 1 > len) throw TruncatedSection(std::string("truncated ") + section);
        return p[pos++];
    }
    uint16_t u16() { return u8() | (uint16_t(u8()) << 8); }
    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(u8()) << (8 * i);
        return v;
    }
};

std::vector<uint8_t> serialize_header(const CgvcContainer& c) {
    std::vector<uint8_t> out;
    put_u32(out, static_cast<uint32_t>(c.meta.width));
    put_u32(out, static_cast<uint32_t>(c.meta.height));
    put_u32(out, static_cast<uint32_t>(c.meta.frame_count));
    put_u32(out, c.meta.fps.num);
    put_u32(out, c.meta.fps.den);
    out.push_back(static_cast<uint8_t>(c.meta.pixel_format));
    out.push_back(static_cast<uint8_t>(c.prior_kind));
    out.push_back(c.codec_id);
    out.push_back(0);  // pad
    put_u32(out, static_cast<uint32_t>(c.plan.keyframes.size()));
    for (int k : c.plan.keyframes) put_u32(out, static_cast<uint32_t>(k));
    return out;
}

std::vector<uint8_t> serialize_stream(const EncodedStream& s) {
    std::vector<uint8_t> out;
    out.push_back(s.codec_id);
    out.push_back(0);
    put_u16(out, 0);  // pad
    put_u32(out, static_cast<uint32_t>(s.frame_count));
    put_u32(out, static_cast<uint32_t>(s.width));
    put_u32(out, static_cast<uint32_t>(s.height));
    put_u32(out, static_cast<uint32_t>(s.bytes.size()));
    out.insert(out.end(), s.bytes.begin(), s.bytes.end());
    return out;
}

std::vector<uint8_t> serialize_params(const ColorParams& p) {
    std::vector<uint8_t> out;
    put_u32(out, static_cast<uint32_t>(p.frames.size()));
    for (const auto& frame : p.frames)
        for (const ChannelStats& cs : frame) {
            put_u32(out, cs.mu);
            put_u32(out, cs.sigma);
        }
    return out;
}

EncodedStream parse_stream(Reader& r) {
    EncodedStream s;
    s.codec_id = r.u8();
    r.u8();
    r.u16();
    s.frame_count = static_cast<int>(r.u32());
    s.width = static_cast<int>(r.u32());
    s.height = static_cast<int>(r.u32());
    uint32_t n = r.u32();
    if (r.pos + n > r.len) throw TruncatedSection(std::string("truncated ") + r.section);
    s.bytes.assign(r.p + r.pos, r.p + r.pos + n);
    r.pos += n;
    return s;
}

}  // namespace

bool operator==(const CgvcContainer& a, const CgvcContainer& b) {
    auto stream_eq = [](const EncodedStream& x, const EncodedStream& y) {
        return x.bytes == y.bytes && x.codec_id == y.codec_id &&
               x.frame_count == y.frame_count && x.width == y.width &&
               x.height == y.height;
    };
    return a.meta.width == b.meta.width && a.meta.height == b.meta.height &&
           a.meta.frame_count == b.meta.frame_count &&
           a.meta.fps.num == b.meta.fps.num && a.meta.fps.den == b.meta.fps.den &&
           a.meta.pixel_format == b.meta.pixel_format &&
           a.plan.keyframes == b.plan.keyframes && a.prior_kind == b.prior_kind &&
           a.codec_id == b.codec_id && stream_eq(a.b_k, b.b_k) &&
           stream_eq(a.b_p, b.b_p) && a.b_c == b.b_c;
}

std::vector<uint8_t> serialize(const CgvcContainer& c) {
    std::vector<uint8_t> sections[kSectionCount] = {
        serialize_header(c), serialize_stream(c.b_k), serialize_stream(c.b_p),
        serialize_params(c.b_c)};
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, CgvcContainer::kVersion);
    put_u16(out, kSectionCount);
    for (const auto& s : sections) {
        put_u32(out, static_cast<uint32_t>(s.size()));
        put_u32(out, crc_of(s));
    }
    for (const auto& s : sections) out.insert(out.end(), s.begin(), s.end());
    return out;
}

CgvcContainer parse(const std::vector<uint8_t>& bytes) {
    Reader top{bytes.data(), bytes.size(), 0, "container header"};
    char magic[4];
    for (char& m : magic) m = static_cast<char>(top.u8());
    if (std::memcmp(magic, kMagic, 4) != 0) throw BadMagic();
    uint16_t version = top.u16();
    if (version > CgvcContainer::kVersion) throw UnsupportedVersion(version);
    uint16_t section_count = top.u16();
    if (section_count != kSectionCount)
        throw TruncatedSection("unexpected section count " +
                               std::to_string(section_count));

    struct Entry {
        uint32_t len, crc;
    };
    Entry table[kSectionCount];
    for (Entry& e : table) {
        e.len = top.u32();
        e.crc = top.u32();
    }
    std::vector<uint8_t> sections[kSectionCount];
    for (int i = 0; i < kSectionCount; ++i) {
        if (top.pos + table[i].len > bytes.size())
            throw TruncatedSection(std::string("truncated ") + kSectionNames[i]);
        sections[i].assign(bytes.begin() + top.pos, bytes.begin() + top.pos + table[i].len);
        top.pos += table[i].len;
        if (crc_of(sections[i]) != table[i].crc) throw CrcMismatch(kSectionNames[i]);
    }
    if (top.pos != bytes.size())
        throw TruncatedSection("trailing bytes after last section");

    CgvcContainer c;
    {
        Reader r{sections[0].data(), sections[0].size(), 0, "HEADER"};
        c.meta.width = static_cast<int>(r.u32());
        c.meta.height = static_cast<int>(r.u32());
        c.meta.frame_count = static_cast<int>(r.u32());
        c.meta.fps.num = r.u32();
        c.meta.fps.den = r.u32();
        c.meta.pixel_format = static_cast<PixelFormat>(r.u8());
        c.prior_kind = static_cast<PriorKind>(r.u8());
        c.codec_id = r.u8();
        r.u8();
        uint32_t plan_count = r.u32();
        for (uint32_t i = 0; i < plan_count; ++i)
            c.plan.keyframes.push_back(static_cast<int>(r.u32()));
    }
    {
        Reader r{sections[1].data(), sections[1].size(), 0, "B_K"};
        c.b_k = parse_stream(r);
    }
    {
        Reader r{sections[2].data(), sections[2].size(), 0, "B_P"};
        c.b_p = parse_stream(r);
    }
    {
        Reader r{sections[3].data(), sections[3].size(), 0, "B_C"};
        uint32_t n = r.u32();
        for (uint32_t i = 0; i < n; ++i) {
            std::array<ChannelStats, 3> frame;
            for (ChannelStats& cs : frame) {
                cs.mu = r.u32();
                cs.sigma = r.u32();
            }
            c.b_c.frames.push_back(frame);
        }
    }

    for (int k : c.plan.keyframes)
        if (k < 1 || k > c.meta.frame_count)
            throw PlanOutOfRange("keyframe index " + std::to_string(k) +
                                 " outside [1, " +
                                 std::to_string(c.meta.frame_count) + "]");
    for (size_t i = 1; i < c.plan.keyframes.size(); ++i)
        if (c.plan.keyframes[i] <= c.plan.keyframes[i - 1])
            throw PlanOutOfRange("keyframe plan is not strictly increasing");
    const int n_kf = static_cast<int>(c.plan.keyframes.size());
    if (c.b_k.frame_count != n_kf)
        throw PlanStreamMismatch("B_K carries " + std::to_string(c.b_k.frame_count) +
                                 " frames for " + std::to_string(n_kf) +
                                 " keyframes");
    if (c.b_p.frame_count != c.meta.frame_count - n_kf)
        throw PlanStreamMismatch(
            "B_P carries " + std::to_string(c.b_p.frame_count) + " frames for " +
            std::to_string(c.meta.frame_count - n_kf) + " non-keyframes");
    if (static_cast<int>(c.b_c.frames.size()) != c.meta.frame_count)
        throw TruncatedSection("B_C entry count does not match frame count");
    return c;
}

RateBreakdown total_rate(const CgvcContainer& c) {
    auto bytes = serialize(c);
    RateBreakdown rb;
    const Rational& fps = c.meta.fps;
    const int t_total = c.meta.frame_count;
    rb.total_kbps = measure_rate_kbps(8ull * bytes.size(), fps, t_total);
    rb.b_k_kbps = measure_rate_kbps(c.b_k.size_bits(), fps, t_total);
    rb.b_p_kbps = measure_rate_kbps(c.b_p.size_bits(), fps, t_total);
    rb.b_c_kbps =
        measure_rate_kbps(8ull * (4 + 24ull * c.b_c.frames.size()), fps, t_total);
    rb.overhead_kbps = rb.total_kbps - rb.b_k_kbps - rb.b_p_kbps - rb.b_c_kbps;
    return rb;
}

}  // namespace cgvc
