#include "mlc/io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace mlc::io {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t o) {
    return std::uint32_t{b[o]} | std::uint32_t{b[o + 1]} << 8 | std::uint32_t{b[o + 2]} << 16 |
           std::uint32_t{b[o + 3]} << 24;
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t o) {
    return static_cast<std::uint16_t>(b[o] | b[o + 1] << 8);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t o, const char *tag) {
    return std::memcmp(b.data() + o, tag, 4) == 0;
}

void put32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(std::vector<std::uint8_t> &out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

[[noreturn]] void malformed(const std::string &what) { throw Error(ErrorCode::Malformed, "WAV: " + what); }

} // namespace

WavData parse_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
        malformed("not a RIFF/WAVE file");

    bool have_fmt = false;
    WavInfo info;
    std::uint16_t block_align = 0;
    std::span<const std::uint8_t> data;
    bool have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t size = le32(bytes, pos + 4);
        const std::size_t body = pos + 8;
        if (size > bytes.size() - body)
            malformed("chunk runs past the end of the file");
        if (tag_is(bytes, pos, "fmt ")) {
            if (size < 16)
                malformed("fmt chunk too short");
            std::uint16_t format = le16(bytes, body);
            info.channels = le16(bytes, body + 2);
            info.sample_rate = le32(bytes, body + 4);
            block_align = le16(bytes, body + 12);
            info.bits_per_sample = le16(bytes, body + 14);
            if (format == kFormatExtensible) {
                if (size < 40)
                    malformed("extensible fmt chunk too short");
                format = le16(bytes, body + 24); // first two bytes of the subformat GUID
            }
            if (format != kFormatPcm)
                throw Error(ErrorCode::Unsupported, "WAV: only integer PCM is supported");
            have_fmt = true;
        } else if (tag_is(bytes, pos, "data")) {
            data = bytes.subspan(body, size);
            have_data = true;
        }
        pos = body + size + (size & 1u);
    }
    if (!have_fmt)
        malformed("missing fmt chunk");
    if (!have_data)
        malformed("missing data chunk");
    if (info.bits_per_sample != 16)
        throw Error(ErrorCode::Unsupported,
                    "WAV: unsupported bit depth " + std::to_string(info.bits_per_sample));
    const std::uint16_t ch = info.channels;
    if (ch != 1 && ch != 2 && ch != 5 && ch != 6)
        throw Error(ErrorCode::Unsupported, "WAV: unsupported channel count " + std::to_string(ch));
    if (block_align != 2u * ch)
        malformed("block alignment does not match channel count");

    info.frames = data.size() / block_align;
    const bool drop_lfe = ch == 6;
    const std::size_t out_channels = drop_lfe ? 5 : ch;
    SampleBlock block(out_channels, info.frames, info.sample_rate);
    for (std::size_t t = 0; t < info.frames; ++t) {
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < ch; ++c) {
            if (drop_lfe && c == 3)
                continue;
            block.at(out_c++, t) = static_cast<std::int16_t>(le16(data, (t * ch + c) * 2));
        }
    }
    return {info, std::move(block)};
}

WavData read_wav(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_wav(bytes);
}

std::vector<std::uint8_t> serialize_wav(const SampleBlock &block) {
    const std::size_t ch = block.channels();
    const std::uint64_t data_bytes = std::uint64_t{2} * ch * block.length();
    if (data_bytes > 0xFFFFFFFFull - 36)
        throw Error(ErrorCode::InvalidArgument, "WAV: too much audio for a RIFF file");

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put32(out, static_cast<std::uint32_t>(36 + data_bytes));
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put32(out, 16);
    put16(out, kFormatPcm);
    put16(out, static_cast<std::uint16_t>(ch));
    put32(out, block.sample_rate());
    put32(out, static_cast<std::uint32_t>(block.sample_rate() * 2u * ch));
    put16(out, static_cast<std::uint16_t>(2 * ch));
    put16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put32(out, static_cast<std::uint32_t>(data_bytes));
    for (std::size_t t = 0; t < block.length(); ++t)
        for (std::size_t c = 0; c < ch; ++c)
            put16(out, static_cast<std::uint16_t>(block.at(c, t)));
    return out;
}

void write_wav(const std::filesystem::path &path, const SampleBlock &block) {
    const auto bytes = serialize_wav(block);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::Io, "cannot create " + path.string());
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::Io, "write failed for " + path.string());
}

} // namespace mlc::io
