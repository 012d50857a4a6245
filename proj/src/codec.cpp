#include "cgvc/codec.hpp"

#include <sys/wait.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <utility>

#include "cgvc/errors.hpp"
#include "cgvc/frame_io.hpp"

namespace cgvc {

namespace {

constexpr char kInternalMagic[4] = {'I', 'C', '0', '1'};

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back(v >> 8);
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

struct ByteReader {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;

    uint8_t u8() {
        if (pos + 1 > bytes.size()) throw CorruptStream("truncated internal stream");
        return bytes[pos++];
    }
    uint16_t u16() { return u8() | (uint16_t(u8()) << 8); }
    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(u8()) << (8 * i);
        return v;
    }
};

// quantize -> raster-order previous-sample prediction -> RLE (u16 run, u8 value)
void encode_plane(const Plane& p, int q, std::vector<uint8_t>& out) {
    std::vector<uint8_t> residue;
    residue.reserve(p.size());
    uint8_t prev = 0;
    for (uint8_t s : p.data) {
        uint8_t idx = static_cast<uint8_t>((s + q / 2) / q);
        residue.push_back(static_cast<uint8_t>(idx - prev));
        prev = idx;
    }
    std::vector<uint8_t> rle;
    for (size_t i = 0; i < residue.size();) {
        size_t run = 1;
        while (i + run < residue.size() && residue[i + run] == residue[i] &&
               run < 0xffff)
            ++run;
        put_u16(rle, static_cast<uint16_t>(run));
        rle.push_back(residue[i]);
        i += run;
    }
    put_u32(out, static_cast<uint32_t>(rle.size()));
    out.insert(out.end(), rle.begin(), rle.end());
}

Plane decode_plane(ByteReader& r, int w, int h, int q) {
    uint32_t len = r.u32();
    if (r.pos + len > r.bytes.size())
        throw CorruptStream("truncated internal stream");
    Plane p(w, h);
    size_t filled = 0;
    uint8_t prev = 0;
    size_t end = r.pos + len;
    while (r.pos < end) {
        uint16_t run = r.u16();
        uint8_t val = r.u8();
        if (run == 0 || filled + run > p.size())
            throw CorruptStream("malformed RLE run in internal stream");
        for (uint16_t k = 0; k < run; ++k) {
            prev = static_cast<uint8_t>(prev + val);
            p.data[filled++] = static_cast<uint8_t>(std::min(255, int(prev) * q));
        }
    }
    if (filled != p.size()) throw CorruptStream("short plane in internal stream");
    return p;
}

EncodedStream encode_internal(const std::vector<Frame>& frames, int q) {
    if (q < 1 || q > 64) throw InputError("internal codec quality must be in 1..64");
    const Frame& f0 = frames.front();
    std::vector<uint8_t> payload;
    for (const Frame& f : frames) {
        if (f.y.w != f0.y.w || f.y.h != f0.y.h)
            throw InputError("inconsistent frame dimensions");
        encode_plane(f.y, q, payload);
        encode_plane(f.u, q, payload);
        encode_plane(f.v, q, payload);
    }
    // deflate mops up residual redundancy the RLE leaves behind (and its
    // worst-case expansion on noisy residue); keeps rate monotone in q
    uLongf bound = compressBound(static_cast<uLong>(payload.size()));
    std::vector<uint8_t> packed(bound);
    if (compress2(packed.data(), &bound, payload.data(),
                  static_cast<uLong>(payload.size()), 9) != Z_OK)
        throw CgvcError("internal codec: deflate failed");
    packed.resize(bound);

    std::vector<uint8_t> out;
    out.insert(out.end(), kInternalMagic, kInternalMagic + 4);
    out.push_back(static_cast<uint8_t>(q));
    put_u16(out, static_cast<uint16_t>(f0.y.w));
    put_u16(out, static_cast<uint16_t>(f0.y.h));
    put_u32(out, static_cast<uint32_t>(frames.size()));
    put_u32(out, static_cast<uint32_t>(payload.size()));
    out.insert(out.end(), packed.begin(), packed.end());
    EncodedStream s;
    s.bytes = std::move(out);
    s.codec_id = static_cast<uint8_t>(CodecBackend::Internal);
    s.frame_count = static_cast<int>(frames.size());
    s.width = f0.y.w;
    s.height = f0.y.h;
    return s;
}

std::vector<Frame> decode_internal(const EncodedStream& stream) {
    ByteReader hdr{stream.bytes};
    for (char c : kInternalMagic)
        if (hdr.u8() != static_cast<uint8_t>(c))
            throw CorruptStream("bad internal codec magic");
    int q = hdr.u8();
    int w = hdr.u16();
    int h = hdr.u16();
    uint32_t n = hdr.u32();
    uint32_t raw_size = hdr.u32();
    if (q < 1 || q > 64 || w <= 0 || h <= 0 || w % 2 || h % 2)
        throw CorruptStream("bad internal codec header");
    uint64_t plane_budget = uint64_t(w) * h * 3 / 2 * 3 + 12;  // worst-case RLE
    if (raw_size > (plane_budget + 16) * std::max<uint32_t>(n, 1))
        throw CorruptStream("implausible payload size in internal stream");
    std::vector<uint8_t> payload(raw_size);
    uLongf got = raw_size;
    if (uncompress(payload.data(), &got, stream.bytes.data() + hdr.pos,
                   static_cast<uLong>(stream.bytes.size() - hdr.pos)) != Z_OK ||
        got != raw_size)
        throw CorruptStream("corrupt deflate payload in internal stream");

    ByteReader r{payload};
    std::vector<Frame> frames;
    frames.reserve(n);
    for (uint32_t t = 1; t <= n; ++t) {
        Frame f;
        f.index = static_cast<int>(t);
        f.y = decode_plane(r, w, h, q);
        f.u = decode_plane(r, w / 2, h / 2, q);
        f.v = decode_plane(r, w / 2, h / 2, q);
        frames.push_back(std::move(f));
    }
    if (r.pos != payload.size())
        throw CorruptStream("trailing bytes in internal stream");
    return frames;
}

std::string substitute(std::string tmpl,
                       const std::vector<std::pair<std::string, std::string>>& subs) {
    for (const auto& [key, val] : subs) {
        size_t pos;
        while ((pos = tmpl.find(key)) != std::string::npos)
            tmpl.replace(pos, key.size(), val);
    }
    return tmpl;
}

void require_placeholders(const std::string& tmpl,
                          std::initializer_list<const char*> names) {
    for (const char* n : names)
        if (tmpl.find(n) == std::string::npos)
            throw InputError("codec command template is missing placeholder " +
                             std::string(n));
}

std::filesystem::path make_scratch(const CodecSpec& spec) {
    std::filesystem::path base =
        spec.scratch_dir.empty() ? std::filesystem::temp_directory_path()
                                 : std::filesystem::path(spec.scratch_dir);
    static int counter = 0;
    auto dir = base / ("cgvc_codec_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

void run_command(const std::string& cmd, const char* what) {
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
        int status = WIFEXITED(rc) ? WEXITSTATUS(rc) : rc;
        throw ExternalToolError(std::string(what) + " command failed (exit " +
                                std::to_string(status) + "): " + cmd);
    }
}

EncodedStream encode_external(const std::vector<Frame>& frames, const CodecSpec& spec,
                              const Rational& fps) {
    require_placeholders(spec.encode_cmd, {"{input}", "{output}"});
    auto dir = make_scratch(spec);
    const Frame& f0 = frames.front();
    VideoMeta meta{f0.y.w, f0.y.h, static_cast<int>(frames.size()), fps};
    auto in_path = (dir / "in.yuv").string();
    auto out_path = (dir / "out.bin").string();
    write_video(frames, in_path, VideoFormat::RawYuv, meta);
    run_command(substitute(spec.encode_cmd,
                           {{"{input}", in_path},
                            {"{output}", out_path},
                            {"{width}", std::to_string(meta.width)},
                            {"{height}", std::to_string(meta.height)},
                            {"{fps}", std::to_string(fps.num) + "/" + std::to_string(fps.den)},
                            {"{qp}", std::to_string(spec.quality)},
                            {"{frames}", std::to_string(frames.size())}}),
                "external encode");
    std::ifstream in(out_path, std::ios::binary);
    if (!in) throw ExternalToolError("external encoder produced no output");
    EncodedStream s;
    s.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    s.codec_id = static_cast<uint8_t>(CodecBackend::External);
    s.frame_count = static_cast<int>(frames.size());
    s.width = meta.width;
    s.height = meta.height;
    std::filesystem::remove_all(dir);
    return s;
}

std::vector<Frame> decode_external(const EncodedStream& stream, const CodecSpec& spec,
                                   const Rational& fps) {
    require_placeholders(spec.decode_cmd, {"{input}", "{output}"});
    auto dir = make_scratch(spec);
    auto in_path = (dir / "in.bin").string();
    auto out_path = (dir / "out.yuv").string();
    {
        std::ofstream out(in_path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(stream.bytes.data()),
                  static_cast<std::streamsize>(stream.bytes.size()));
    }
    run_command(substitute(spec.decode_cmd,
                           {{"{input}", in_path},
                            {"{output}", out_path},
                            {"{width}", std::to_string(stream.width)},
                            {"{height}", std::to_string(stream.height)},
                            {"{fps}", std::to_string(fps.num) + "/" + std::to_string(fps.den)},
                            {"{qp}", std::to_string(spec.quality)},
                            {"{frames}", std::to_string(stream.frame_count)}}),
                "external decode");
    VideoMeta meta{stream.width, stream.height, stream.frame_count, fps};
    auto [out_meta, frames] = read_video(out_path, meta);
    std::filesystem::remove_all(dir);
    return frames;
}

}  // namespace

EncodedStream encode_stream(const std::vector<Frame>& frames, const CodecSpec& spec,
                            const Rational& fps) {
    if (frames.empty()) throw InputError("encode_stream: empty frame sequence");
    return spec.backend == CodecBackend::Internal ? encode_internal(frames, spec.quality)
                                                  : encode_external(frames, spec, fps);
}

std::vector<Frame> decode_stream(const EncodedStream& stream, const CodecSpec& spec,
                                 const Rational& fps) {
    if (stream.codec_id != static_cast<uint8_t>(spec.backend))
        throw CorruptStream("codec id does not match backend");
    auto frames = stream.codec_id == static_cast<uint8_t>(CodecBackend::Internal)
                      ? decode_internal(stream)
                      : decode_external(stream, spec, fps);
    if (static_cast<int>(frames.size()) != stream.frame_count)
        throw CorruptStream("decoded frame count does not match stream header");
    return frames;
}

double measure_rate_kbps(uint64_t size_bits, const Rational& fps, int frame_count) {
    if (frame_count < 1 || fps.num == 0 || fps.den == 0)
        throw InputError("measure_rate requires frame_count >= 1 and fps > 0");
    return static_cast<double>(size_bits) * fps.as_double() / frame_count / 1000.0;
}

}  // namespace cgvc
