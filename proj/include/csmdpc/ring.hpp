#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmdpc/bits.hpp"

namespace csmdpc {

class NotInvertibleError : public std::runtime_error {
public:
    NotInvertibleError() : std::runtime_error("ring element is not invertible") {}
};

/// Element of F2[x]/(x^r - 1), i.e. a binary circulant r x r matrix stored as
/// its first row. Coefficient j of x^j lives at bit j of word j/64.
class DenseRingElement {
public:
    DenseRingElement() = default;
    explicit DenseRingElement(std::size_t r)
        : r_(r), w_(bits::words_for(r) + 1, 0) {}

    static DenseRingElement one(std::size_t r) {
        DenseRingElement a(r);
        a.set(0, true);
        return a;
    }

    std::size_t r() const { return r_; }
    bool get(std::size_t j) const { return bits::get_bit(w_.data(), j); }
    void set(std::size_t j, bool v) {
        if (v)
            bits::set_bit(w_.data(), j);
        else
            w_[j / 64] &= ~(std::uint64_t{1} << (j % 64));
    }
    void flip(std::size_t j) { bits::flip_bit(w_.data(), j); }

    std::size_t weight() const { return bits::popcount(w_.data(), w_.size()); }
    bool is_zero() const {
        for (auto w : w_)
            if (w != 0) return false;
        return true;
    }

    const std::uint64_t* words() const { return w_.data(); }
    std::uint64_t* words() { return w_.data(); }
    std::size_t nwords() const { return w_.size(); }  // includes guard word

    bool operator==(const DenseRingElement& o) const { return r_ == o.r_ && w_ == o.w_; }

    /// Bit j at byte j/8, bit j%8; trailing pad bits zero.
    std::vector<std::uint8_t> to_bytes() const;
    static DenseRingElement from_bytes(std::size_t r, std::span<const std::uint8_t> data);

private:
    std::size_t r_ = 0;
    std::vector<std::uint64_t> w_;
};

/// A circulant block's first row as a strictly increasing list of nonzero
/// coordinates.
struct SparseSupport {
    std::size_t r = 0;
    std::vector<std::uint32_t> support;

    SparseSupport() = default;
    SparseSupport(std::size_t r_, std::vector<std::uint32_t> coords);

    std::size_t weight() const { return support.size(); }
    DenseRingElement densify() const;
    /// Support of a(x^-1): coordinates (r - c) mod r, re-sorted.
    SparseSupport reversed() const;
};

DenseRingElement add(const DenseRingElement& a, const DenseRingElement& b);

/// a(x) * b(x) mod (x^r - 1), computed as the XOR of |support(b)| cyclic
/// rotations of a.
DenseRingElement mul_dense_sparse(const DenseRingElement& a, const SparseSupport& b);

DenseRingElement mul_sparse_sparse(const SparseSupport& a, const SparseSupport& b);

/// Multiplication by x^k (k reduced mod r).
DenseRingElement rotate(const DenseRingElement& a, std::uint64_t k);

/// a(x^-1): coefficient j goes to (r - j) mod r.
DenseRingElement reverse(const DenseRingElement& a);

struct InvertStats {
    std::size_t steps = 0;
    std::size_t invariant_violations = 0;
    long max_deg_sum = 0;  // max over steps of deg(f)+deg(c) and deg(g)+deg(b)
};

/// Inverse of h mod (x^r - 1) by the extended Euclidean algorithm with the
/// paired-buffer layout: (f,c) share one (r+2)-bit buffer, (g,b) the other,
/// for 2r+4 working bits total. With checked=true the degree bound
/// deg(f)+deg(c) <= r, deg(g)+deg(b) <= r is verified after every division
/// step; a violation throws std::logic_error.
DenseRingElement invert(const DenseRingElement& h, bool checked = false,
                        InvertStats* stats = nullptr);

// Schoolbook O(r^2) coefficient convolution. Test oracle for the rotation
// based product; kept out of any hot path.
DenseRingElement mul_schoolbook(const DenseRingElement& a, const DenseRingElement& b);

}  // namespace csmdpc
