#include "mlc/mlc.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <iterator>
#include <new>
#include <string>
#include <vector>

#include "mlc/codec.hpp"
#include "mlc/corpus.hpp"
#include "mlc/io.hpp"

struct mlc_audio {
    mlc::SampleBlock block;
};

struct mlc_stream {
    std::vector<std::uint8_t> bytes;
    std::vector<std::uint64_t> mix_bits;
};

struct mlc_decoded {
    mlc::codec::ContainerHeader header;
    std::vector<mlc_audio> mixes;
};

namespace {

thread_local std::string g_last_error;
thread_local std::int64_t g_last_frame = -1;

mlc_status to_status(mlc::ErrorCode code) {
    using mlc::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return MLC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Layout: return MLC_ERR_LAYOUT;
    case ErrorCode::UndefinedRatio: return MLC_ERR_UNDEFINED_RATIO;
    case ErrorCode::NotApplicable: return MLC_ERR_NOT_APPLICABLE;
    case ErrorCode::Unsupported: return MLC_ERR_UNSUPPORTED;
    case ErrorCode::Malformed: return MLC_ERR_MALFORMED;
    case ErrorCode::Io: return MLC_ERR_IO;
    case ErrorCode::Stream: return MLC_ERR_STREAM;
    case ErrorCode::Empty: return MLC_ERR_EMPTY;
    }
    return MLC_ERR_INTERNAL;
}

template <typename F>
mlc_status guarded(F &&body) {
    g_last_error.clear();
    g_last_frame = -1;
    try {
        body();
        return MLC_OK;
    } catch (const mlc::StreamError &e) {
        g_last_error = e.what();
        g_last_frame = e.frame();
        return MLC_ERR_STREAM;
    } catch (const mlc::Error &e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc &) {
        g_last_error = "out of memory";
        return MLC_ERR_INTERNAL;
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return MLC_ERR_INTERNAL;
    }
}

void require(bool ok, const char *what) {
    if (!ok)
        throw mlc::Error(mlc::ErrorCode::InvalidArgument, what);
}

mlc::codec::MixCoding from_c(const mlc_mix_coding &c) {
    require(c.kind >= MLC_MODEL_SEP && c.kind <= MLC_MODEL_JOINT_DMX, "unknown model kind");
    mlc::codec::MixCoding out;
    out.model.kind = static_cast<mlc::ModelKind>(c.kind);
    out.model.order = c.order;
    out.model.downmix_channels = c.downmix_channels;
    out.model.delta = c.delta;
    out.svd = c.svd != 0;
    return out;
}

mlc_mix_coding to_c(const mlc::codec::MixCoding &c) {
    mlc_mix_coding out{};
    out.kind = static_cast<mlc_model_kind>(c.model.kind);
    out.order = c.model.order;
    out.downmix_channels = c.model.downmix_channels;
    out.delta = c.model.delta;
    out.svd = c.svd ? 1 : 0;
    return out;
}

} // namespace

extern "C" {

const char *mlc_version(void) { return "1.0.0"; }

const char *mlc_status_string(mlc_status status) {
    switch (status) {
    case MLC_OK: return "ok";
    case MLC_ERR_INTERNAL: return "internal error";
    default: return mlc::error_code_name(static_cast<mlc::ErrorCode>(status));
    }
}

const char *mlc_last_error(void) { return g_last_error.c_str(); }

int64_t mlc_last_error_frame(void) { return g_last_frame; }

mlc_status mlc_audio_create(uint32_t channels, uint64_t length, uint32_t sample_rate, const int16_t *planar,
                            mlc_audio **out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        mlc::SampleBlock block(channels, length, sample_rate);
        if (planar && length)
            std::memcpy(block.channel(0).data(), planar, sizeof(int16_t) * channels * length);
        *out = new mlc_audio{std::move(block)};
    });
}

void mlc_audio_free(mlc_audio *audio) { delete audio; }

uint32_t mlc_audio_channels(const mlc_audio *audio) {
    return audio ? static_cast<uint32_t>(audio->block.channels()) : 0;
}

uint64_t mlc_audio_length(const mlc_audio *audio) { return audio ? audio->block.length() : 0; }

uint32_t mlc_audio_sample_rate(const mlc_audio *audio) { return audio ? audio->block.sample_rate() : 0; }

const int16_t *mlc_audio_channel(const mlc_audio *audio, uint32_t channel) {
    if (!audio || channel >= audio->block.channels())
        return nullptr;
    return audio->block.channel(channel).data();
}

int mlc_audio_equal(const mlc_audio *a, const mlc_audio *b, uint32_t *channel, uint64_t *sample) {
    if (!a || !b)
        return 0;
    const auto &x = a->block;
    const auto &y = b->block;
    if (x.channels() != y.channels() || x.length() != y.length())
        return 0;
    for (std::size_t c = 0; c < x.channels(); ++c)
        for (std::size_t t = 0; t < x.length(); ++t)
            if (x.at(c, t) != y.at(c, t)) {
                if (channel)
                    *channel = static_cast<uint32_t>(c);
                if (sample)
                    *sample = t;
                return 0;
            }
    return 1;
}

mlc_status mlc_wav_read(const char *path, mlc_audio **out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new mlc_audio{mlc::io::read_wav(path).block};
    });
}

mlc_status mlc_wav_write(const char *path, const mlc_audio *audio) {
    return guarded([&] {
        require(path && audio, "null argument");
        mlc::io::write_wav(path, audio->block);
    });
}

mlc_status mlc_itu_downmix(const mlc_audio *upmix, mlc_audio **out) {
    return guarded([&] {
        require(upmix && out, "null argument");
        *out = new mlc_audio{mlc::itu_downmix_5to2(upmix->block)};
    });
}

mlc_status mlc_compression_ratio(uint64_t compressed_bits, const mlc_audio *original, double *out) {
    return guarded([&] {
        require(original && out, "null argument");
        *out = mlc::compression_ratio(compressed_bits, original->block);
    });
}

mlc_mix_coding mlc_mix_coding_default(mlc_model_kind kind, uint32_t downmix_channels) {
    mlc::codec::MixCoding c;
    c.model = mlc::ModelSpec::make(static_cast<mlc::ModelKind>(kind), downmix_channels);
    return to_c(c);
}

mlc_status mlc_parse_model(const char *name, mlc_model_kind *out) {
    return guarded([&] {
        require(name && out, "null argument");
        *out = static_cast<mlc_model_kind>(mlc::parse_model(name));
    });
}

mlc_status mlc_encode(const mlc_audio *const *mixes, const mlc_mix_coding *codings, size_t count,
                      uint32_t frame_size, mlc_stream **out) {
    return guarded([&] {
        require(mixes && codings && out, "null argument");
        std::vector<mlc::codec::MixInput> inputs;
        for (size_t i = 0; i < count; ++i) {
            require(mixes[i] != nullptr, "null mix");
            inputs.push_back({mixes[i]->block, from_c(codings[i])});
        }
        auto encoded = mlc::codec::encode_container(inputs, frame_size);
        *out = new mlc_stream{std::move(encoded.bytes), std::move(encoded.mix_bits)};
    });
}

mlc_status mlc_stream_from_bytes(const uint8_t *data, size_t size, mlc_stream **out) {
    return guarded([&] {
        require(out && (data || size == 0), "null argument");
        *out = new mlc_stream{std::vector<std::uint8_t>(data, data + size), {}};
    });
}

mlc_status mlc_stream_read_file(const char *path, mlc_stream **out) {
    return guarded([&] {
        require(path && out, "null argument");
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw mlc::Error(mlc::ErrorCode::Io, std::string("cannot open ") + path);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        *out = new mlc_stream{std::move(bytes), {}};
    });
}

mlc_status mlc_stream_write_file(const mlc_stream *stream, const char *path) {
    return guarded([&] {
        require(stream && path, "null argument");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw mlc::Error(mlc::ErrorCode::Io, std::string("cannot create ") + path);
        out.write(reinterpret_cast<const char *>(stream->bytes.data()),
                  static_cast<std::streamsize>(stream->bytes.size()));
        if (!out)
            throw mlc::Error(mlc::ErrorCode::Io, std::string("write failed for ") + path);
    });
}

void mlc_stream_free(mlc_stream *stream) { delete stream; }

const uint8_t *mlc_stream_data(const mlc_stream *stream) { return stream ? stream->bytes.data() : nullptr; }

size_t mlc_stream_size(const mlc_stream *stream) { return stream ? stream->bytes.size() : 0; }

mlc_status mlc_stream_mix_bits(const mlc_stream *stream, size_t mix, uint64_t *out) {
    return guarded([&] {
        require(stream && out, "null argument");
        if (mix >= stream->mix_bits.size())
            throw mlc::Error(mlc::ErrorCode::NotApplicable, "no per-mix accounting for this mix");
        *out = stream->mix_bits[mix];
    });
}

mlc_status mlc_decode(const mlc_stream *stream, mlc_decoded **out) {
    return guarded([&] {
        require(stream && out, "null argument");
        auto decoded = mlc::codec::decode_container(stream->bytes);
        auto *result = new mlc_decoded{std::move(decoded.header), {}};
        for (auto &m : decoded.mixes)
            result->mixes.push_back(mlc_audio{std::move(m)});
        *out = result;
    });
}

void mlc_decoded_free(mlc_decoded *decoded) { delete decoded; }

size_t mlc_decoded_mix_count(const mlc_decoded *decoded) { return decoded ? decoded->mixes.size() : 0; }

const mlc_audio *mlc_decoded_mix(const mlc_decoded *decoded, size_t index) {
    if (!decoded || index >= decoded->mixes.size())
        return nullptr;
    return &decoded->mixes[index];
}

mlc_status mlc_decoded_coding(const mlc_decoded *decoded, size_t index, mlc_mix_coding *out) {
    return guarded([&] {
        require(decoded && out && index < decoded->header.mixes.size(), "bad argument");
        *out = to_c(decoded->header.mixes[index].coding);
    });
}

uint32_t mlc_decoded_frame_size(const mlc_decoded *decoded) { return decoded ? decoded->header.frame_size : 0; }

mlc_status mlc_inspect(const mlc_stream *stream, mlc_chunk_info *chunks, size_t capacity, size_t *count) {
    return guarded([&] {
        require(stream && count, "null argument");
        const auto trace = mlc::codec::inspect_container(stream->bytes);
        *count = trace.chunks.size();
        if (!chunks)
            return;
        for (size_t i = 0; i < trace.chunks.size() && i < capacity; ++i) {
            const auto &ct = trace.chunks[i];
            mlc_chunk_info &ci = chunks[i];
            ci.mix = static_cast<uint32_t>(ct.mix);
            ci.frame = ct.frame;
            ci.byte_length = ct.byte_length;
            ci.svd_mode = ct.svd_mode ? 1 : 0;
            ci.escaped_channels = static_cast<uint32_t>(ct.escaped);
            ci.flag_bits = ct.bits.flags;
            ci.warmup_bits = ct.bits.warmup;
            ci.coefficient_bits = ct.bits.coefficients;
            ci.projection_bits = ct.bits.projection;
            ci.rice_param_bits = ct.bits.rice_params;
            ci.payload_bits = ct.bits.payload;
            ci.padding_bits = ct.bits.padding;
        }
    });
}

size_t mlc_measure_config_count(void) { return mlc::codec::measure_configs().size(); }

mlc_status mlc_measure(const mlc_audio *upmix, uint32_t frame_size, uint32_t order, double delta,
                       mlc_ratio_row *rows) {
    return guarded([&] {
        require(upmix && rows, "null argument");
        mlc::codec::MeasureOptions options;
        options.frame_size = frame_size;
        options.order = order;
        if (delta >= 0.0)
            options.delta = delta;
        const auto result = mlc::codec::measure(upmix->block, options);
        for (size_t i = 0; i < result.size(); ++i) {
            mlc_ratio_row &r = rows[i];
            std::memset(r.name, 0, sizeof r.name);
            std::strncpy(r.name, result[i].name.c_str(), sizeof r.name - 1);
            r.kind = static_cast<mlc_model_kind>(result[i].kind);
            r.svd = result[i].svd ? 1 : 0;
            r.upmix_ratio = result[i].upmix_ratio;
            r.total_ratio = result[i].total_ratio;
        }
    });
}

mlc_status mlc_generate_corpus_item(uint64_t seed, uint32_t index, double seconds, uint32_t sample_rate,
                                    mlc_audio **out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        require(seconds >= 0.0 && sample_rate > 0, "bad corpus options");
        *out = new mlc_audio{mlc::corpus::generate_item(seed, index, {seconds, sample_rate})};
    });
}

} // extern "C"
