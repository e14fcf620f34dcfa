#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "csmdpc/ring.hpp"
#include "csmdpc/rng.hpp"

namespace csmdpc {

/// One- or two-layer cyclosymmetric structure (p_1, ..., p_L), r = prod p_i.
/// For L=2 the two-layer ring is realized inside F2[x]/(x^r - 1) via the CRT
/// index embedding, which requires gcd(p_1, p_2) = 1.
class LayerShape {
public:
    LayerShape() = default;  // empty, invalid placeholder
    explicit LayerShape(std::vector<std::uint32_t> layers);

    std::size_t num_layers() const { return p_.size(); }
    std::uint32_t layer(std::size_t i) const { return p_[i]; }
    std::size_t r() const { return r_; }

    /// Number of independent bits: prod(floor(p_i/2) + 1).
    std::size_t compressed_bits() const { return clen_; }

    /// Coordinate with residues (k mod p_1, l mod p_2); L=1 ignores l.
    std::size_t crt(std::size_t k, std::size_t l) const;

    bool operator==(const LayerShape& o) const { return p_ == o.p_; }

private:
    std::vector<std::uint32_t> p_;
    std::size_t r_ = 0;
    std::size_t clen_ = 0;
    std::uint64_t c1_ = 0, c2_ = 0;  // CRT basis for L=2
};

/// Bit vector of the canonical orbit representatives of a cyclosymmetric
/// element. Enumeration order: L=1, j = 0..floor(p/2); L=2, lexicographic
/// over (k = 0..floor(p1/2), l = 0..floor(p2/2)), bit index k*(floor(p2/2)+1)+l.
struct CompressedBlock {
    LayerShape shape;
    std::vector<std::uint8_t> bytes;  // ceil(compressed_bits/8), pad bits zero

    bool get(std::size_t i) const { return (bytes[i / 8] >> (i % 8)) & 1; }
    void set(std::size_t i) { bytes[i / 8] |= std::uint8_t(1u << (i % 8)); }
};

/// Orbit of coordinate m under negation of each layer index: L=1 gives
/// {m, (r-m) mod r}; L=2 the CRT preimages of {(+-k, +-l)}. Sorted, size
/// 1, 2 or 4.
std::vector<std::size_t> orbit(std::size_t m, const LayerShape& shape);

/// True iff the support of a is a union of orbits.
bool is_cyclosymmetric(const DenseRingElement& a, const LayerShape& shape);

CompressedBlock compress(const DenseRingElement& a, const LayerShape& shape);

DenseRingElement expand(const CompressedBlock& c);

CompressedBlock compressed_from_bytes(const LayerShape& shape,
                                      std::span<const std::uint8_t> data);

/// Exact-weight rejection sampling of an orbit-closed support: whole orbits
/// are added while the total stays <= w; the draw restarts from empty when
/// the remaining weight cannot be completed. Throws std::invalid_argument
/// when no union of orbits has weight exactly w.
SparseSupport sample_sparse_cyclosymmetric(const LayerShape& shape, std::size_t w,
                                           Rng& rng);

/// Opt-in error form of weight w over n0 blocks of length r where every
/// block is orbit-closed (the error stands for a sequence of cyclosymmetric
/// ring elements). No security claim is attached to this restriction.
std::vector<std::uint32_t> sample_cyclosymmetric_error(const LayerShape& shape,
                                                       std::size_t n0, std::size_t w,
                                                       Rng& rng);

}  // namespace csmdpc
