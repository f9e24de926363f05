#include "mlc/codec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "mlc/predictor.hpp"
#include "mlc/rice.hpp"
#include "mlc/solver.hpp"

namespace mlc::codec {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'M', 'L', 'C', '1'};

void put_le(std::vector<std::uint8_t> &out, std::uint64_t v, unsigned bytes) {
    for (unsigned i = 0; i < bytes; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t offset, unsigned bytes) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i)
        v |= std::uint64_t{in[offset + i]} << (8 * i);
    return v;
}

CoefficientSet solve_coefficients(const SampleBlock &mix, const SampleBlock *downmix,
                                  const FrameSpan &span, const ModelSpec &model) {
    CoefficientSet set;
    set.per_channel.resize(mix.channels());
    if (model.is_joint()) {
        const auto alpha = solver::solve(solver::build_joint_system(mix, downmix, span, model), model.delta);
        for (std::size_t c = 0; c < mix.channels(); ++c)
            set.per_channel[c] = solver::quantize_coefficients(Eigen::VectorXd(alpha.col(static_cast<Eigen::Index>(c))));
    } else {
        for (std::size_t c = 0; c < mix.channels(); ++c) {
            const auto alpha = solver::solve(solver::build_design_system(mix, downmix, span, model, c), model.delta);
            set.per_channel[c] = solver::quantize_coefficients(Eigen::VectorXd(alpha.col(0)));
        }
    }
    return set;
}

std::uint64_t stream_bits(std::span<const std::int32_t> values, unsigned r) {
    return rice::total_length(values, r);
}

void check_coding(const MixCoding &coding, std::size_t channels) {
    coding.model.validate();
    layout_for_channels(channels);
    if (coding.model.order > kMaxOrder)
        throw Error(ErrorCode::InvalidArgument, "prediction order too large");
}

} // namespace

ChunkBits measure_chunk(const FrameChunk &chunk) {
    ChunkBits bits;
    bits.flags = 1 + chunk.channels();
    bits.warmup = 16u * chunk.warmup.size();
    for (const auto &list : chunk.coefficients.per_channel)
        bits.coefficients += kCoefficientBits * list.size();
    if (chunk.projection)
        bits.projection = kCoefficientBits * chunk.projection->entries.size();
    bits.rice_params = rice::kParamBits * chunk.rice_params.size();
    for (const auto &raw : chunk.verbatim)
        bits.payload += 16u * raw.size();
    for (std::size_t i = 0; i < chunk.streams.size(); ++i)
        bits.payload += stream_bits(chunk.streams[i], chunk.rice_params[i]);
    const std::uint64_t body = bits.flags + bits.warmup + bits.coefficients + bits.projection +
                               bits.rice_params + bits.payload;
    bits.padding = (8u - body % 8u) % 8u;
    return bits;
}

FrameChunk encode_frame(const SampleBlock &mix, const SampleBlock *downmix, const FrameSpan &span,
                        const MixCoding &coding) {
    check_coding(coding, mix.channels());
    const ModelSpec &model = coding.model;
    const std::size_t channels = mix.channels();
    const std::size_t n = span.coded();

    FrameChunk chunk;
    chunk.escaped.assign(channels, 0);
    for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t t = span.begin; t < span.predictable; ++t)
            chunk.warmup.push_back(mix.at(c, t));

    CoefficientSet coeffs = solve_coefficients(mix, downmix, span, model);
    const ResidualBlock residuals = predictor::compute_residuals(mix, downmix, span, coeffs, model);

    // Direct mode, deciding escapes on the way.
    const std::uint64_t coef_bits = kCoefficientBits * model.coefficient_count(channels);
    std::vector<std::size_t> kept;
    std::vector<rice::ParamChoice> direct(channels);
    std::uint64_t direct_bits = 0;
    for (std::size_t c = 0; c < channels; ++c) {
        if (n > 0)
            direct[c] = rice::best_rice_param(residuals.channel(c));
        if (coef_bits + rice::kParamBits + direct[c].bits > 16u * n) {
            chunk.escaped[c] = 1;
            continue;
        }
        kept.push_back(c);
        direct_bits += rice::kParamBits + direct[c].bits;
    }

    // Projection mode over the kept channels.
    const std::size_t k = kept.size();
    ResidualBlock projected;
    std::optional<transform::ProjectionMatrix> q;
    std::vector<rice::ParamChoice> columns;
    if (coding.svd && k >= 2 && n > 0) {
        ResidualBlock sub(k, n);
        for (std::size_t i = 0; i < k; ++i)
            std::copy_n(residuals.channel(kept[i]).begin(), n, sub.channel(i).begin());
        q = transform::fit_projection(sub);
        projected = transform::forward_project(sub, *q);
        std::uint64_t svd_bits = kCoefficientBits * k * k;
        for (std::size_t i = 0; i < k; ++i) {
            columns.push_back(rice::best_rice_param(projected.channel(i)));
            svd_bits += rice::kParamBits + columns.back().bits;
        }
        chunk.svd_mode = svd_bits < direct_bits;
    }

    chunk.coefficients.per_channel.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        if (chunk.escaped[c]) {
            const auto src = mix.channel(c).subspan(span.predictable, n);
            chunk.verbatim.emplace_back(src.begin(), src.end());
        } else {
            chunk.coefficients.per_channel[c] = std::move(coeffs.per_channel[c]);
        }
    }
    if (chunk.svd_mode) {
        chunk.projection = std::move(q);
        for (std::size_t i = 0; i < k; ++i) {
            const auto col = projected.channel(i);
            chunk.streams.emplace_back(col.begin(), col.end());
            chunk.rice_params.push_back(columns[i].param);
        }
    } else {
        for (const std::size_t c : kept) {
            const auto ch = residuals.channel(c);
            chunk.streams.emplace_back(ch.begin(), ch.end());
            chunk.rice_params.push_back(direct[c].param);
        }
    }
    return chunk;
}

void decode_frame(const FrameChunk &chunk, SampleBlock &mix, const SampleBlock *downmix,
                  const FrameSpan &span, const MixCoding &coding) {
    const std::size_t channels = mix.channels();
    const std::size_t n = span.coded();
    const std::size_t w = span.warmup();
    if (chunk.channels() != channels || chunk.warmup.size() != w * channels)
        throw Error(ErrorCode::Stream, "chunk does not match the mix layout");

    for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t t = 0; t < w; ++t)
            mix.at(c, span.begin + t) = chunk.warmup[c * w + t];

    std::vector<std::size_t> kept;
    std::size_t raw_index = 0;
    for (std::size_t c = 0; c < channels; ++c) {
        if (chunk.escaped[c]) {
            const auto &raw = chunk.verbatim.at(raw_index++);
            if (raw.size() != n)
                throw Error(ErrorCode::Stream, "verbatim channel length mismatch");
            std::copy(raw.begin(), raw.end(), mix.channel(c).begin() + static_cast<std::ptrdiff_t>(span.predictable));
        } else {
            kept.push_back(c);
        }
    }
    if (chunk.streams.size() != kept.size())
        throw Error(ErrorCode::Stream, "coded stream count mismatch");

    ResidualBlock sub(kept.size(), n);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (chunk.streams[i].size() != n)
            throw Error(ErrorCode::Stream, "coded stream length mismatch");
        std::copy(chunk.streams[i].begin(), chunk.streams[i].end(), sub.channel(i).begin());
    }
    if (chunk.svd_mode) {
        if (!chunk.projection)
            throw Error(ErrorCode::Stream, "projection mode without a matrix");
        sub = transform::inverse_project(sub, *chunk.projection);
    }

    ResidualBlock residuals(channels, n);
    for (std::size_t i = 0; i < kept.size(); ++i)
        std::copy_n(sub.channel(i).begin(), n, residuals.channel(kept[i]).begin());

    predictor::reconstruct_frame(residuals, mix, downmix, span, chunk.coefficients, coding.model,
                                 chunk.escaped);
}

std::vector<std::uint8_t> write_chunk(const FrameChunk &chunk) {
    rice::BitWriter out;
    out.put_bit(chunk.svd_mode);
    for (const std::uint8_t e : chunk.escaped)
        out.put_bit(e != 0);
    for (const std::int16_t s : chunk.warmup)
        out.put_bits(static_cast<std::uint16_t>(s), 16);
    for (const auto &list : chunk.coefficients.per_channel)
        for (const Half h : list)
            out.put_bits(h.bits, kCoefficientBits);
    if (chunk.svd_mode)
        for (const Half h : chunk.projection->entries)
            out.put_bits(h.bits, kCoefficientBits);
    for (const unsigned r : chunk.rice_params)
        out.put_bits(r, rice::kParamBits);
    for (const auto &raw : chunk.verbatim)
        for (const std::int16_t s : raw)
            out.put_bits(static_cast<std::uint16_t>(s), 16);
    for (std::size_t i = 0; i < chunk.streams.size(); ++i)
        for (const std::int32_t v : chunk.streams[i])
            rice::rice_encode(v, chunk.rice_params[i], out);
    out.align();
    return std::move(out).take();
}

FrameChunk read_chunk(std::span<const std::uint8_t> body, std::size_t channels, const FrameSpan &span,
                      const ModelSpec &model, std::int64_t frame, ChunkBits *bits) {
    rice::BitReader in(body, frame);
    const std::size_t n = span.coded();
    const std::size_t w = span.warmup();
    ChunkBits acc;

    FrameChunk chunk;
    chunk.svd_mode = in.get_bit();
    chunk.escaped.resize(channels);
    std::size_t kept = 0;
    for (auto &e : chunk.escaped) {
        e = in.get_bit() ? 1 : 0;
        kept += e ? 0 : 1;
    }
    acc.flags = in.position();
    if (chunk.svd_mode && kept < 2)
        throw StreamError(frame, "projection mode with fewer than two coded channels");

    auto mark = in.position();
    chunk.warmup.resize(w * channels);
    for (auto &s : chunk.warmup)
        s = static_cast<std::int16_t>(in.get_bits(16));
    acc.warmup = in.position() - mark;

    mark = in.position();
    const std::size_t count = model.coefficient_count(channels);
    chunk.coefficients.per_channel.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        if (chunk.escaped[c])
            continue;
        auto &list = chunk.coefficients.per_channel[c];
        list.resize(count);
        for (auto &h : list)
            h.bits = static_cast<std::uint16_t>(in.get_bits(kCoefficientBits));
    }
    acc.coefficients = in.position() - mark;

    mark = in.position();
    if (chunk.svd_mode) {
        transform::ProjectionMatrix q{kept, std::vector<Half>(kept * kept)};
        for (auto &h : q.entries) {
            h.bits = static_cast<std::uint16_t>(in.get_bits(kCoefficientBits));
            if (!std::isfinite(to_double(h)))
                throw StreamError(frame, "non-finite projection entry");
        }
        chunk.projection = std::move(q);
    }
    acc.projection = in.position() - mark;

    mark = in.position();
    chunk.rice_params.resize(kept);
    for (auto &r : chunk.rice_params) {
        r = static_cast<unsigned>(in.get_bits(rice::kParamBits));
        if (r > rice::kMaxParam)
            throw StreamError(frame, "rice parameter out of range");
    }
    acc.rice_params = in.position() - mark;

    mark = in.position();
    for (std::size_t c = 0; c < channels; ++c) {
        if (!chunk.escaped[c])
            continue;
        auto &raw = chunk.verbatim.emplace_back(n);
        for (auto &s : raw)
            s = static_cast<std::int16_t>(in.get_bits(16));
    }
    chunk.streams.resize(kept);
    for (std::size_t i = 0; i < kept; ++i) {
        auto &stream = chunk.streams[i];
        stream.resize(n);
        for (auto &v : stream)
            v = rice::rice_decode(in, chunk.rice_params[i]);
    }
    acc.payload = in.position() - mark;

    const std::uint64_t used = in.position();
    if ((used + 7) / 8 != body.size())
        throw StreamError(frame, "chunk length " + std::to_string(body.size()) + " bytes, content used " +
                                     std::to_string((used + 7) / 8));
    acc.padding = in.remaining();
    if (acc.padding && in.get_bits(static_cast<unsigned>(acc.padding)) != 0)
        throw StreamError(frame, "non-zero padding bits");
    if (bits)
        *bits = acc;
    return chunk;
}

std::vector<std::uint8_t> write_header(const ContainerHeader &header) {
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.push_back(header.version);
    out.push_back(header.bit_depth);
    out.push_back(static_cast<std::uint8_t>(header.mixes.size()));
    out.push_back(0);
    put_le(out, header.sample_rate, 4);
    put_le(out, header.frame_size, 4);
    put_le(out, header.total_samples, 8);
    for (const MixHeader &m : header.mixes) {
        out.push_back(static_cast<std::uint8_t>(m.layout));
        out.push_back(static_cast<std::uint8_t>(layout_channels(m.layout)));
        out.push_back(static_cast<std::uint8_t>(m.coding.model.kind));
        out.push_back(static_cast<std::uint8_t>(m.coding.model.order));
        out.push_back(static_cast<std::uint8_t>(m.coding.model.downmix_channels));
        out.push_back(m.coding.svd ? 1 : 0);
        put_le(out, 0, 2);
        put_le(out, std::bit_cast<std::uint64_t>(m.coding.model.delta), 8);
    }
    return out;
}

namespace {

void validate_hierarchy(const ContainerHeader &h) {
    if (h.mixes.empty())
        throw Error(ErrorCode::InvalidArgument, "container needs at least one mix");
    if (h.mixes.size() > 255)
        throw Error(ErrorCode::InvalidArgument, "too many mixes");
    if (h.frame_size == 0)
        throw Error(ErrorCode::InvalidArgument, "frame size must be positive");
    for (std::size_t m = 0; m < h.mixes.size(); ++m) {
        const ModelSpec &model = h.mixes[m].coding.model;
        model.validate();
        if (h.frame_size < model.order)
            throw Error(ErrorCode::InvalidArgument, "frame size must not be smaller than the prediction order");
        if (model.uses_downmix()) {
            if (m == 0)
                throw Error(ErrorCode::InvalidArgument,
                            "the lowest mix cannot use a downmix model");
            if (model.downmix_channels != layout_channels(h.mixes[m - 1].layout))
                throw Error(ErrorCode::InvalidArgument,
                            "downmix channel count does not match the preceding mix");
        }
    }
}

} // namespace

ContainerHeader read_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderFixedBytes)
        throw StreamError(-1, "truncated header");
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
        throw StreamError(-1, "bad magic");
    ContainerHeader h;
    h.version = bytes[4];
    if (h.version != kVersion)
        throw StreamError(-1, "unsupported version " + std::to_string(h.version));
    h.bit_depth = bytes[5];
    if (h.bit_depth != 16)
        throw StreamError(-1, "unsupported bit depth");
    const std::size_t mix_count = bytes[6];
    h.sample_rate = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
    h.frame_size = static_cast<std::uint32_t>(get_le(bytes, 12, 4));
    h.total_samples = get_le(bytes, 16, 8);
    if (bytes.size() < kHeaderFixedBytes + kHeaderMixBytes * mix_count)
        throw StreamError(-1, "truncated header");
    for (std::size_t m = 0; m < mix_count; ++m) {
        const std::size_t o = kHeaderFixedBytes + kHeaderMixBytes * m;
        MixHeader mh;
        try {
            mh.layout = layout_for_channels(bytes[o]);
        } catch (const Error &e) {
            throw StreamError(-1, e.what());
        }
        if (bytes[o + 1] != bytes[o])
            throw StreamError(-1, "layout and channel count disagree");
        if (bytes[o + 2] > static_cast<std::uint8_t>(ModelKind::JointDmx))
            throw StreamError(-1, "unknown model kind");
        mh.coding.model.kind = static_cast<ModelKind>(bytes[o + 2]);
        mh.coding.model.order = bytes[o + 3];
        mh.coding.model.downmix_channels = bytes[o + 4];
        mh.coding.svd = (bytes[o + 5] & 1u) != 0;
        mh.coding.model.delta = std::bit_cast<double>(get_le(bytes, o + 8, 8));
        h.mixes.push_back(mh);
    }
    try {
        validate_hierarchy(h);
    } catch (const StreamError &) {
        throw;
    } catch (const Error &e) {
        throw StreamError(-1, e.what());
    }
    return h;
}

EncodedStream encode_container(std::span<const MixInput> mixes, std::uint32_t frame_size) {
    ContainerHeader header;
    header.frame_size = frame_size;
    if (mixes.empty())
        throw Error(ErrorCode::InvalidArgument, "container needs at least one mix");
    header.sample_rate = mixes.front().audio.sample_rate();
    header.total_samples = mixes.front().audio.length();
    for (const MixInput &m : mixes) {
        if (m.audio.length() != header.total_samples)
            throw Error(ErrorCode::InvalidArgument, "all mixes must have the same length");
        if (m.audio.sample_rate() != header.sample_rate)
            throw Error(ErrorCode::InvalidArgument, "all mixes must have the same sample rate");
        check_coding(m.coding, m.audio.channels());
        header.mixes.push_back({layout_for_channels(m.audio.channels()), m.coding});
    }
    validate_hierarchy(header);

    EncodedStream stream;
    stream.bytes = write_header(header);
    stream.header_bits = stream.bytes.size() * 8u;
    stream.mix_bits.assign(mixes.size(), 0);

    const std::uint64_t frames = header.frame_count();
    for (std::uint64_t k = 0; k < frames; ++k) {
        const std::size_t begin = k * frame_size;
        const std::size_t end = std::min<std::uint64_t>(header.total_samples, begin + std::uint64_t{frame_size});
        for (std::size_t m = 0; m < mixes.size(); ++m) {
            const MixCoding &coding = mixes[m].coding;
            const SampleBlock *downmix = coding.model.uses_downmix() ? &mixes[m - 1].audio : nullptr;
            const FrameSpan span = FrameSpan::make(begin, end, coding.model.order);
            const auto body = write_chunk(encode_frame(mixes[m].audio, downmix, span, coding));
            put_le(stream.bytes, body.size(), 4);
            stream.bytes.insert(stream.bytes.end(), body.begin(), body.end());
            stream.mix_bits[m] += kLengthPrefixBits + 8u * body.size();
        }
    }
    return stream;
}

namespace {

DecodedContainer decode_impl(std::span<const std::uint8_t> bytes, ContainerTrace *trace) {
    DecodedContainer out;
    out.header = read_header(bytes);
    const ContainerHeader &h = out.header;
    for (const MixHeader &m : h.mixes)
        out.mixes.emplace_back(layout_channels(m.layout), h.total_samples, h.sample_rate);

    std::size_t offset = h.byte_size();
    const std::uint64_t frames = h.frame_count();
    for (std::uint64_t k = 0; k < frames; ++k) {
        const auto frame = static_cast<std::int64_t>(k);
        const std::size_t begin = k * h.frame_size;
        const std::size_t end = std::min<std::uint64_t>(h.total_samples, begin + std::uint64_t{h.frame_size});
        for (std::size_t m = 0; m < h.mixes.size(); ++m) {
            const MixCoding &coding = h.mixes[m].coding;
            if (bytes.size() - offset < 4)
                throw StreamError(frame, "truncated chunk length");
            const auto length = static_cast<std::uint32_t>(get_le(bytes, offset, 4));
            offset += 4;
            if (bytes.size() - offset < length)
                throw StreamError(frame, "chunk extends past the end of the stream");
            const auto body = bytes.subspan(offset, length);
            offset += length;

            const FrameSpan span = FrameSpan::make(begin, end, coding.model.order);
            ChunkBits bits;
            try {
                const FrameChunk chunk = read_chunk(body, out.mixes[m].channels(), span, coding.model, frame, &bits);
                const SampleBlock *downmix = coding.model.uses_downmix() ? &out.mixes[m - 1] : nullptr;
                decode_frame(chunk, out.mixes[m], downmix, span, coding);
                if (trace) {
                    ChunkTrace ct;
                    ct.mix = m;
                    ct.frame = k;
                    ct.byte_length = length;
                    ct.svd_mode = chunk.svd_mode;
                    ct.escaped = static_cast<std::size_t>(std::count(chunk.escaped.begin(), chunk.escaped.end(), 1));
                    ct.bits = bits;
                    trace->chunks.push_back(ct);
                }
            } catch (const StreamError &) {
                throw;
            } catch (const Error &e) {
                throw StreamError(frame, e.what());
            }
        }
    }
    if (offset != bytes.size())
        throw StreamError(-1, "trailing bytes after the last chunk");
    return out;
}

} // namespace

DecodedContainer decode_container(std::span<const std::uint8_t> bytes) { return decode_impl(bytes, nullptr); }

ContainerTrace inspect_container(std::span<const std::uint8_t> bytes) {
    ContainerTrace trace;
    trace.header = decode_impl(bytes, &trace).header;
    return trace;
}

std::span<const MeasureConfig> measure_configs() noexcept {
    static constexpr std::array<MeasureConfig, 6> configs{{
        {"SEP", ModelKind::Sep, false},
        {"JOINT", ModelKind::Joint, false},
        {"JOINT+SVD", ModelKind::Joint, true},
        {"SEP_DMX+SVD", ModelKind::SepDmx, true},
        {"JOINT_DMX", ModelKind::JointDmx, false},
        {"JOINT_DMX+SVD", ModelKind::JointDmx, true},
    }};
    return configs;
}

std::vector<RatioRow> measure(const SampleBlock &upmix, const MeasureOptions &options) {
    const SampleBlock downmix = itu_downmix_5to2(upmix);
    std::vector<RatioRow> rows;
    for (const MeasureConfig &cfg : measure_configs()) {
        ModelSpec model = ModelSpec::make(cfg.kind, cfg.kind == ModelKind::SepDmx || cfg.kind == ModelKind::JointDmx
                                                        ? static_cast<unsigned>(downmix.channels())
                                                        : 0u,
                                          options.order);
        if (options.delta && cfg.kind != ModelKind::Sep)
            model.delta = *options.delta;
        const std::array<MixInput, 2> mixes{{
            {downmix, {ModelSpec::make(ModelKind::Sep, 0, options.order), false}},
            {upmix, {model, cfg.svd}},
        }};
        const EncodedStream s = encode_container(mixes, options.frame_size);
        RatioRow row;
        row.name = cfg.name;
        row.kind = cfg.kind;
        row.svd = cfg.svd;
        row.upmix_ratio = compression_ratio(s.mix_bits[1], upmix);
        row.total_ratio = static_cast<double>(s.total_bits()) /
                          (16.0 * static_cast<double>(upmix.channels() + downmix.channels()) *
                           static_cast<double>(upmix.length()));
        rows.push_back(row);
    }
    return rows;
}

} // namespace mlc::codec
