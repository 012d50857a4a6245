#pragma once

#include <string>
#include <vector>

#include "cgvc/types.hpp"

namespace cgvc {

enum class CodecBackend : uint8_t { Internal = 1, External = 2 };

struct CodecSpec {
    CodecBackend backend = CodecBackend::Internal;
    int quality = 1;  // internal quantizer step 1..64 (1 = lossless), or external QP
    // command templates with {input},{output},{width},{height},{fps},{qp},{frames}
    std::string encode_cmd;
    std::string decode_cmd;
    std::string scratch_dir;  // per-invocation temp workspace for External
};

struct EncodedStream {
    std::vector<uint8_t> bytes;
    uint8_t codec_id = 1;  // CodecBackend value
    int frame_count = 0;
    int width = 0;
    int height = 0;

    uint64_t size_bits() const { return 8ull * bytes.size(); }
};

EncodedStream encode_stream(const std::vector<Frame>& frames, const CodecSpec& spec,
                            const Rational& fps = {});

std::vector<Frame> decode_stream(const EncodedStream& stream, const CodecSpec& spec,
                                 const Rational& fps = {});

double measure_rate_kbps(uint64_t size_bits, const Rational& fps, int frame_count);

inline double measure_rate_kbps(const EncodedStream& stream, const Rational& fps,
                                int frame_count) {
    return measure_rate_kbps(stream.size_bits(), fps, frame_count);
}

}  // namespace cgvc
