#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlc/error.hpp"

namespace mlc::rice {

constexpr unsigned kMaxParam = 20;
constexpr unsigned kParamBits = 5;

/// Sign folding: 0, -1, 1, -2, 2 -> 0, 1, 2, 3, 4.
constexpr std::uint32_t zigzag(std::int32_t n) noexcept {
    return (static_cast<std::uint32_t>(n) << 1) ^ static_cast<std::uint32_t>(n >> 31);
}

constexpr std::int32_t unzigzag(std::uint32_t z) noexcept {
    return static_cast<std::int32_t>((z >> 1) ^ (0u - (z & 1u)));
}

/// Codeword length in bits: 1 + r + (zigzag(n) >> r).
constexpr std::uint64_t rice_length(std::int32_t n, unsigned r) noexcept {
    return 1u + r + static_cast<std::uint64_t>(zigzag(n) >> r);
}

/// MSB-first bit writer over a growable byte buffer.
class BitWriter {
public:
    void put_bits(std::uint64_t value, unsigned count);
    void put_bit(bool bit) { put_bits(bit ? 1u : 0u, 1); }
    void put_ones(std::uint64_t count);

    /// Pads with zero bits up to the next byte boundary.
    void align();

    std::uint64_t bit_count() const noexcept { return bits_; }
    const std::vector<std::uint8_t> &bytes() const noexcept { return buf_; }
    std::vector<std::uint8_t> take() && { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
    std::uint64_t bits_ = 0;
};

/// MSB-first reader; running past the end throws StreamError.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes, std::int64_t frame = -1)
        : data_(bytes), frame_(frame) {}

    std::uint64_t get_bits(unsigned count);
    bool get_bit() { return get_bits(1) != 0; }

    /// Counts one-bits up to and including the terminating zero.
    std::uint64_t get_unary();

    std::uint64_t position() const noexcept { return pos_; }
    std::uint64_t size_bits() const noexcept { return data_.size() * 8u; }
    std::uint64_t remaining() const noexcept { return size_bits() - pos_; }
    std::int64_t frame() const noexcept { return frame_; }

private:
    [[noreturn]] void overrun() const;

    std::span<const std::uint8_t> data_;
    std::uint64_t pos_ = 0;
    std::int64_t frame_;
};

void rice_encode(std::int32_t n, unsigned r, BitWriter &sink);
std::int32_t rice_decode(BitReader &source, unsigned r);

struct ParamChoice {
    unsigned param = 0;
    std::uint64_t bits = 0;
};

/// Exhaustive search over r in [0, 20]; ties go to the smaller r.
ParamChoice best_rice_param(std::span<const std::int32_t> values);

/// Sum of rice_length over the sequence.
std::uint64_t total_length(std::span<const std::int32_t> values, unsigned r) noexcept;

} // namespace mlc::rice
