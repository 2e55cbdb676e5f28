#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "lpdes/errors.hpp"

namespace lpdes {

// Fixed-width bit vector. Bits are numbered 1..width, bit 1 being the most
// significant one, which is the numbering used by the DES tables.
class BitBlock {
public:
    BitBlock() = default;

    explicit BitBlock(int width, std::uint64_t value = 0) : width_(width) {
        if (!valid_width(width))
            throw InvalidArgument("unsupported block width " + std::to_string(width));
        value_ = value & mask(width);
        if (value_ != value)
            throw InvalidArgument("value does not fit in " + std::to_string(width) + " bits");
    }

    static constexpr bool valid_width(int w) noexcept {
        return w == 4 || w == 6 || w == 28 || w == 32 || w == 48 || w == 56 || w == 64;
    }

    int width() const noexcept { return width_; }
    std::uint64_t value() const noexcept { return value_; }

    bool bit(int i) const {
        check_index(i);
        return (value_ >> (width_ - i)) & 1u;
    }

    void set(int i, bool v) {
        check_index(i);
        const std::uint64_t m = std::uint64_t{1} << (width_ - i);
        value_ = v ? (value_ | m) : (value_ & ~m);
    }

    void flip(int i) { set(i, !bit(i)); }

    // Hex digits, most significant first; width must be a multiple of 4.
    static BitBlock from_hex(std::string_view hex, int width = 64) {
        if (width % 4 != 0 || static_cast<int>(hex.size()) != width / 4)
            throw InvalidArgument("hex string '" + std::string(hex) + "' does not have " +
                                  std::to_string(width / 4) + " digits");
        std::uint64_t v = 0;
        for (char c : hex) {
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else throw InvalidArgument("bad hex digit in '" + std::string(hex) + "'");
            v = (v << 4) | static_cast<std::uint64_t>(d);
        }
        return BitBlock(width, v);
    }

    std::string to_hex() const {
        static constexpr char digits[] = "0123456789ABCDEF";
        std::string s;
        for (int shift = width_ - 4; shift >= 0; shift -= 4)
            s.push_back(digits[(value_ >> shift) & 0xF]);
        return s;
    }

    std::string to_bits() const {
        std::string s;
        for (int i = 1; i <= width_; ++i) s.push_back(bit(i) ? '1' : '0');
        return s;
    }

    friend bool operator==(const BitBlock&, const BitBlock&) = default;

    friend BitBlock operator^(const BitBlock& a, const BitBlock& b) {
        if (a.width_ != b.width_) throw InvalidArgument("xor of blocks with different widths");
        return BitBlock(a.width_, a.value_ ^ b.value_);
    }

private:
    static constexpr std::uint64_t mask(int w) noexcept {
        return w >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w) - 1);
    }

    void check_index(int i) const {
        if (i < 1 || i > width_)
            throw InvalidArgument("bit index " + std::to_string(i) + " outside 1.." +
                                  std::to_string(width_));
    }

    int width_ = 64;
    std::uint64_t value_ = 0;
};

} // namespace lpdes
