#include "csmdpc/ring.hpp"

#include <algorithm>

namespace csmdpc {

namespace {

void require_same_r(std::size_t ra, std::size_t rb) {
    if (ra != rb) throw std::invalid_argument("ring elements have mismatched r");
}

// Reads 64 cyclic bits of an r-bit string starting at position pos (< r).
std::uint64_t cyclic_read64(const std::uint64_t* w, std::size_t pos, std::size_t r) {
    if (pos + 64 <= r) return bits::read64(w, pos);
    std::size_t head = r - pos;  // bits pos..r-1
    std::uint64_t lo = bits::read64(w, pos);
    if (head < 64) {
        lo &= (head == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << head) - 1);
        // wrap around to position 0; may need a second wrap for r < 64
        std::size_t need = 64 - head;
        std::size_t got = head;
        std::size_t src = 0;
        while (need > 0) {
            std::uint64_t v = bits::read64(w, src);
            std::size_t take = std::min<std::size_t>(need, r - src);
            if (take < 64) v &= (std::uint64_t{1} << take) - 1;
            lo |= v << got;
            got += take;
            need -= take;
            src = (src + take) % r;
        }
    }
    return lo;
}

// dst ^= rotate(src, k): dst bit j ^= src bit (j - k) mod r.
void xor_rotated(std::uint64_t* dst, const std::uint64_t* src, std::size_t k,
                 std::size_t r) {
    std::size_t nw = bits::words_for(r);
    std::size_t start = (r - k % r) % r;
    for (std::size_t wi = 0; wi < nw; ++wi) {
        std::size_t pos = (start + wi * 64) % r;
        std::uint64_t v = cyclic_read64(src, pos, r);
        if (wi == nw - 1 && r % 64 != 0) v &= (std::uint64_t{1} << (r % 64)) - 1;
        dst[wi] ^= v;
    }
}

}  // namespace

std::vector<std::uint8_t> DenseRingElement::to_bytes() const {
    std::vector<std::uint8_t> out((r_ + 7) / 8, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t wi = i / 8, sh = (i % 8) * 8;
        out[i] = std::uint8_t(w_[wi] >> sh);
    }
    return out;
}

DenseRingElement DenseRingElement::from_bytes(std::size_t r,
                                              std::span<const std::uint8_t> data) {
    if (data.size() != (r + 7) / 8)
        throw std::invalid_argument("dense element: wrong byte length");
    DenseRingElement a(r);
    for (std::size_t i = 0; i < data.size(); ++i)
        a.w_[i / 8] |= std::uint64_t(data[i]) << ((i % 8) * 8);
    if (r % 8 != 0) {
        std::uint8_t pad = std::uint8_t(data.back() >> (r % 8));
        if (pad != 0) throw std::invalid_argument("dense element: nonzero pad bits");
    }
    return a;
}

SparseSupport::SparseSupport(std::size_t r_, std::vector<std::uint32_t> coords)
    : r(r_), support(std::move(coords)) {
    std::sort(support.begin(), support.end());
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] >= r) throw std::invalid_argument("support coordinate >= r");
        if (i > 0 && support[i] == support[i - 1])
            throw std::invalid_argument("duplicate support coordinate");
    }
}

DenseRingElement SparseSupport::densify() const {
    DenseRingElement a(r);
    for (auto c : support) a.set(c, true);
    return a;
}

SparseSupport SparseSupport::reversed() const {
    std::vector<std::uint32_t> coords;
    coords.reserve(support.size());
    for (auto c : support) coords.push_back(c == 0 ? 0 : std::uint32_t(r) - c);
    return SparseSupport(r, std::move(coords));
}

DenseRingElement add(const DenseRingElement& a, const DenseRingElement& b) {
    require_same_r(a.r(), b.r());
    DenseRingElement c = a;
    for (std::size_t i = 0; i < c.nwords(); ++i) c.words()[i] ^= b.words()[i];
    return c;
}

DenseRingElement mul_dense_sparse(const DenseRingElement& a, const SparseSupport& b) {
    require_same_r(a.r(), b.r);
    DenseRingElement c(a.r());
    for (auto k : b.support) xor_rotated(c.words(), a.words(), k, a.r());
    return c;
}

DenseRingElement mul_sparse_sparse(const SparseSupport& a, const SparseSupport& b) {
    require_same_r(a.r, b.r);
    return mul_dense_sparse(a.densify(), b);
}

DenseRingElement rotate(const DenseRingElement& a, std::uint64_t k) {
    DenseRingElement c(a.r());
    xor_rotated(c.words(), a.words(), std::size_t(k % a.r()), a.r());
    return c;
}

DenseRingElement reverse(const DenseRingElement& a) {
    DenseRingElement c(a.r());
    for (std::size_t j = 0; j < a.r(); ++j)
        if (a.get(j)) c.set(j == 0 ? 0 : a.r() - j, true);
    return c;
}

DenseRingElement mul_schoolbook(const DenseRingElement& a, const DenseRingElement& b) {
    require_same_r(a.r(), b.r());
    std::size_t r = a.r();
    DenseRingElement c(r);
    for (std::size_t i = 0; i < r; ++i) {
        if (!a.get(i)) continue;
        for (std::size_t j = 0; j < r; ++j) {
            if (!b.get(j)) continue;
            std::size_t k = i + j;
            if (k >= r) k -= r;
            c.flip(k);
        }
    }
    return c;
}

namespace {

// One (r+2)-bit buffer holding a pair of polynomials: the "lo" polynomial
// with coefficient i at bit i, and the "hi" polynomial with coefficient i at
// bit (r+1-i). The Euclidean degree bound keeps the two regions disjoint.
struct PairedBuffer {
    std::vector<std::uint64_t> w;
    long deg_lo = -1;  // -1 for the zero polynomial
    long deg_hi = -1;

    explicit PairedBuffer(std::size_t r) : w(bits::words_for(r + 2) + 1, 0) {}

    bool lo_bit(long i) const { return bits::get_bit(w.data(), std::size_t(i)); }
};

}  // namespace

DenseRingElement invert(const DenseRingElement& h, bool checked, InvertStats* stats) {
    const long r = long(h.r());
    // Buffer A holds (f, c), buffer B holds (g, b), with the invariants
    // f = b*h + u*m and g = c*h + v*m for m = x^r - 1; u, v never materialized.
    PairedBuffer bufA(h.r()), bufB(h.r());
    PairedBuffer* A = &bufA;
    PairedBuffer* B = &bufB;

    // f = m = x^r + 1, c = 1, g = h, b = 0.
    bits::set_bit(A->w.data(), 0);
    bits::set_bit(A->w.data(), std::size_t(r));
    A->deg_lo = r;
    bits::set_bit(A->w.data(), std::size_t(r + 1));  // hi coefficient 0
    A->deg_hi = 0;
    for (long j = 0; j < r; ++j)
        if (h.get(std::size_t(j))) bits::set_bit(B->w.data(), std::size_t(j));
    B->deg_lo = bits::highest_set_below(B->w.data(), r - 1);
    B->deg_hi = -1;

    auto check = [&](PairedBuffer* P) {
        long sum = std::max(P->deg_lo, 0L) + std::max(P->deg_hi, 0L);
        if (stats) stats->max_deg_sum = std::max(stats->max_deg_sum, sum);
        if (sum > r) {
            if (stats) ++stats->invariant_violations;
            throw std::logic_error("invert: degree invariant violated");
        }
    };

    while (true) {
        if (A->deg_lo < B->deg_lo) std::swap(A, B);
        if (B->deg_lo == 0) break;  // the smaller polynomial is 1
        if (B->deg_lo < 0) throw NotInvertibleError();
        long k = A->deg_lo - B->deg_lo;
        // f ^= x^k * g
        bits::xor_bits_shifted(A->w.data(), B->w.data(), 0,
                               std::size_t(B->deg_lo) + 1, k);
        A->deg_lo = bits::highest_set_below(A->w.data(), A->deg_lo - 1);
        // b ^= x^k * c: in hi storage, shift bits down by k.
        if (A->deg_hi >= 0) {
            std::size_t src_lo = std::size_t(r + 1 - A->deg_hi);
            bits::xor_bits_shifted(B->w.data(), A->w.data(), src_lo,
                                   std::size_t(A->deg_hi) + 1, -k);
            long new_max = std::max(B->deg_hi, A->deg_hi + k);
            B->deg_hi = -1;
            long low = bits::lowest_set_from(B->w.data(), r + 1 - new_max, r + 2);
            if (low >= 0) B->deg_hi = r + 1 - low;
        }
        if (stats) ++stats->steps;
        if (checked || stats) {
            check(A);
            check(B);
        }
    }

    // B's lo polynomial is 1; its cofactor is A's hi polynomial, which is
    // therefore the inverse of h.
    DenseRingElement inv(h.r());
    for (long i = 0; i <= A->deg_hi; ++i)
        if (bits::get_bit(A->w.data(), std::size_t(r + 1 - i))) inv.set(std::size_t(i), true);
    return inv;
}

}  // namespace csmdpc
