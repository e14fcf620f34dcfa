#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace csmdpc::bits {

inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t nbits) {
    return (nbits + kWordBits - 1) / kWordBits;
}

// Reads 64 bits starting at an arbitrary bit offset. The word array must
// have a zero guard word past the last data word.
inline std::uint64_t read64(const std::uint64_t* w, std::size_t pos) {
    std::size_t wi = pos / kWordBits;
    std::size_t sh = pos % kWordBits;
    std::uint64_t lo = w[wi] >> sh;
    if (sh != 0) lo |= w[wi + 1] << (kWordBits - sh);
    return lo;
}

inline bool get_bit(const std::uint64_t* w, std::size_t j) {
    return (w[j / kWordBits] >> (j % kWordBits)) & 1u;
}

inline void set_bit(std::uint64_t* w, std::size_t j) {
    w[j / kWordBits] |= std::uint64_t{1} << (j % kWordBits);
}

inline void flip_bit(std::uint64_t* w, std::size_t j) {
    w[j / kWordBits] ^= std::uint64_t{1} << (j % kWordBits);
}

inline std::size_t popcount(const std::uint64_t* w, std::size_t nwords) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < nwords; ++i) c += std::size_t(std::popcount(w[i]));
    return c;
}

// Index of the highest set bit at or below maxbit, or -1 if none.
inline long highest_set_below(const std::uint64_t* w, long maxbit) {
    if (maxbit < 0) return -1;
    long wi = maxbit / long(kWordBits);
    std::uint64_t word = w[wi];
    long sh = maxbit % long(kWordBits);
    if (sh != 63) word &= (std::uint64_t{1} << (sh + 1)) - 1;
    while (true) {
        if (word != 0) return wi * long(kWordBits) + (63 - std::countl_zero(word));
        if (--wi < 0) return -1;
        word = w[wi];
    }
}

// Index of the lowest set bit in [minbit, limit), or -1 if none.
inline long lowest_set_from(const std::uint64_t* w, long minbit, long limit) {
    if (minbit < 0) minbit = 0;
    long wi = minbit / long(kWordBits);
    std::uint64_t word = w[wi] & ~((std::uint64_t{1} << (minbit % long(kWordBits))) - 1);
    long last = (limit - 1) / long(kWordBits);
    while (wi <= last) {
        if (word != 0) {
            long b = wi * long(kWordBits) + std::countr_zero(word);
            return b < limit ? b : -1;
        }
        ++wi;
        if (wi <= last) word = w[wi];
    }
    return -1;
}

// dst[src_lo+shift .. src_lo+shift+nbits) ^= src[src_lo .. src_lo+nbits).
// shift may be negative. Both arrays need a guard word.
inline void xor_bits_shifted(std::uint64_t* dst, const std::uint64_t* src,
                             std::size_t src_lo, std::size_t nbits, long shift) {
    if (nbits == 0) return;
    std::size_t dlo = std::size_t(long(src_lo) + shift);
    std::size_t done = 0;
    while (done < nbits) {
        std::size_t dpos = dlo + done;
        std::size_t in_word = kWordBits - dpos % kWordBits;
        std::size_t chunk = nbits - done < in_word ? nbits - done : in_word;
        std::uint64_t v = read64(src, src_lo + done);
        if (chunk < kWordBits) v &= (std::uint64_t{1} << chunk) - 1;
        dst[dpos / kWordBits] ^= v << (dpos % kWordBits);
        done += chunk;
    }
}

}  // namespace csmdpc::bits
