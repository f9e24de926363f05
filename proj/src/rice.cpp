#include "mlc/rice.hpp"

#include <array>

namespace mlc::rice {

void BitWriter::put_bits(std::uint64_t value, unsigned count) {
    for (unsigned i = count; i-- > 0;) {
        const std::uint64_t byte = bits_ >> 3;
        if (byte == buf_.size())
            buf_.push_back(0);
        if ((value >> i) & 1u)
            buf_[byte] |= static_cast<std::uint8_t>(0x80u >> (bits_ & 7u));
        ++bits_;
    }
}

void BitWriter::put_ones(std::uint64_t count) {
    while (count >= 32) {
        put_bits(0xFFFFFFFFu, 32);
        count -= 32;
    }
    put_bits((std::uint64_t{1} << count) - 1u, static_cast<unsigned>(count));
}

void BitWriter::align() {
    if (bits_ & 7u)
        put_bits(0, 8u - static_cast<unsigned>(bits_ & 7u));
}

void BitReader::overrun() const { throw StreamError(frame_, "unexpected end of data"); }

std::uint64_t BitReader::get_bits(unsigned count) {
    if (count > remaining())
        overrun();
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) {
        const std::uint8_t byte = data_[pos_ >> 3];
        v = (v << 1) | ((byte >> (7u - (pos_ & 7u))) & 1u);
        ++pos_;
    }
    return v;
}

std::uint64_t BitReader::get_unary() {
    std::uint64_t q = 0;
    for (;;) {
        if (pos_ >= size_bits())
            overrun();
        // Skip whole 0xFF bytes when aligned.
        if ((pos_ & 7u) == 0 && data_[pos_ >> 3] == 0xFF) {
            q += 8;
            pos_ += 8;
            continue;
        }
        const bool bit = (data_[pos_ >> 3] >> (7u - (pos_ & 7u))) & 1u;
        ++pos_;
        if (!bit)
            return q;
        ++q;
    }
}

void rice_encode(std::int32_t n, unsigned r, BitWriter &sink) {
    const std::uint32_t z = zigzag(n);
    sink.put_ones(z >> r);
    sink.put_bit(false);
    sink.put_bits(z & ((std::uint64_t{1} << r) - 1u), r);
}

std::int32_t rice_decode(BitReader &source, unsigned r) {
    const std::uint64_t q = source.get_unary();
    if (q > (std::uint64_t{0xFFFFFFFFu} >> r))
        throw StreamError(source.frame(), "rice quotient out of range");
    const std::uint64_t z = (q << r) | source.get_bits(r);
    return unzigzag(static_cast<std::uint32_t>(z));
}

std::uint64_t total_length(std::span<const std::int32_t> values, unsigned r) noexcept {
    std::uint64_t sum = 0;
    for (const std::int32_t v : values)
        sum += zigzag(v) >> r;
    return sum + values.size() * (1u + static_cast<std::uint64_t>(r));
}

ParamChoice best_rice_param(std::span<const std::int32_t> values) {
    if (values.empty())
        throw Error(ErrorCode::Empty, "rice parameter search needs at least one value");

    // sum(z >> r) for all r in one pass over the data.
    std::array<std::uint64_t, kMaxParam + 1> shifted{};
    for (const std::int32_t v : values) {
        const std::uint32_t z = zigzag(v);
        for (unsigned r = 0; r <= kMaxParam; ++r)
            shifted[r] += z >> r;
    }
    ParamChoice best{0, shifted[0] + values.size()};
    for (unsigned r = 1; r <= kMaxParam; ++r) {
        const std::uint64_t bits = shifted[r] + values.size() * (1u + std::uint64_t{r});
        if (bits < best.bits)
            best = {r, bits};
    }
    return best;
}

} // namespace mlc::rice
