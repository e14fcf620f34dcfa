#include "csmdpc/cyclosym.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace csmdpc {

namespace {

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, nt = 1, rr = std::int64_t(m), nr = std::int64_t(a % m);
    while (nr != 0) {
        std::int64_t q = rr / nr;
        std::swap(t -= q * nt, nt);
        std::swap(rr -= q * nr, nr);
    }
    if (rr != 1) throw std::invalid_argument("layer sizes are not coprime");
    return std::uint64_t(t < 0 ? t + std::int64_t(m) : t);
}

}  // namespace

LayerShape::LayerShape(std::vector<std::uint32_t> layers) : p_(std::move(layers)) {
    if (p_.empty() || p_.size() > 2)
        throw std::invalid_argument("layer count must be 1 or 2");
    r_ = 1;
    clen_ = 1;
    for (auto p : p_) {
        if (p < 3) throw std::invalid_argument("layer size must be >= 3");
        r_ *= p;
        clen_ *= p / 2 + 1;
    }
    if (p_.size() == 2) {
        std::uint64_t p1 = p_[0], p2 = p_[1];
        c1_ = p2 * mod_inverse(p2 % p1, p1) % r_;
        c2_ = p1 * mod_inverse(p1 % p2, p2) % r_;
    }
}

std::size_t LayerShape::crt(std::size_t k, std::size_t l) const {
    if (p_.size() == 1) return k % p_[0];
    return std::size_t((std::uint64_t(k) * c1_ + std::uint64_t(l) * c2_) % r_);
}

std::vector<std::size_t> orbit(std::size_t m, const LayerShape& shape) {
    std::vector<std::size_t> out;
    std::size_t r = shape.r();
    if (shape.num_layers() == 1) {
        out = {m, (r - m) % r};
    } else {
        std::size_t p1 = shape.layer(0), p2 = shape.layer(1);
        std::size_t k = m % p1, l = m % p2;
        for (std::size_t kk : {k, (p1 - k) % p1})
            for (std::size_t ll : {l, (p2 - l) % p2}) out.push_back(shape.crt(kk, ll));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool is_cyclosymmetric(const DenseRingElement& a, const LayerShape& shape) {
    if (a.r() != shape.r())
        throw std::invalid_argument("element and shape have mismatched r");
    for (std::size_t m = 0; m < a.r(); ++m) {
        if (!a.get(m)) continue;
        for (std::size_t o : orbit(m, shape))
            if (!a.get(o)) return false;
    }
    return true;
}

CompressedBlock compress(const DenseRingElement& a, const LayerShape& shape) {
    if (!is_cyclosymmetric(a, shape))
        throw std::invalid_argument("compress: element is not cyclosymmetric");
    CompressedBlock c{shape, std::vector<std::uint8_t>((shape.compressed_bits() + 7) / 8, 0)};
    if (shape.num_layers() == 1) {
        for (std::size_t j = 0; j <= shape.layer(0) / 2; ++j)
            if (a.get(j)) c.set(j);
    } else {
        std::size_t half2 = shape.layer(1) / 2 + 1;
        for (std::size_t k = 0; k <= shape.layer(0) / 2; ++k)
            for (std::size_t l = 0; l < half2; ++l)
                if (a.get(shape.crt(k, l))) c.set(k * half2 + l);
    }
    return c;
}

DenseRingElement expand(const CompressedBlock& c) {
    const LayerShape& shape = c.shape;
    DenseRingElement a(shape.r());
    auto put = [&](std::size_t m) {
        for (std::size_t o : orbit(m, shape)) a.set(o, true);
    };
    if (shape.num_layers() == 1) {
        for (std::size_t j = 0; j <= shape.layer(0) / 2; ++j)
            if (c.get(j)) put(j);
    } else {
        std::size_t half2 = shape.layer(1) / 2 + 1;
        for (std::size_t k = 0; k <= shape.layer(0) / 2; ++k)
            for (std::size_t l = 0; l < half2; ++l)
                if (c.get(k * half2 + l)) put(shape.crt(k, l));
    }
    return a;
}

CompressedBlock compressed_from_bytes(const LayerShape& shape,
                                      std::span<const std::uint8_t> data) {
    std::size_t len = shape.compressed_bits();
    if (data.size() != (len + 7) / 8)
        throw std::invalid_argument("compressed block: wrong byte length");
    if (len % 8 != 0 && (data.back() >> (len % 8)) != 0)
        throw std::invalid_argument("compressed block: nonzero pad bits");
    return CompressedBlock{shape, std::vector<std::uint8_t>(data.begin(), data.end())};
}

SparseSupport sample_sparse_cyclosymmetric(const LayerShape& shape, std::size_t w,
                                           Rng& rng) {
    std::size_t r = shape.r();
    if (w < 1 || w > r) throw std::invalid_argument("target weight out of range");

    // Feasibility: count orbits by size, then look for a1 + 2*a2 + 4*a4 = w.
    std::size_t n1 = 0, n2 = 0, n4 = 0;
    {
        std::vector<bool> seen(r, false);
        for (std::size_t m = 0; m < r; ++m) {
            if (seen[m]) continue;
            auto o = orbit(m, shape);
            for (auto x : o) seen[x] = true;
            (o.size() == 1 ? n1 : o.size() == 2 ? n2 : n4)++;
        }
    }
    bool feasible = false;
    for (std::size_t a1 = 0; a1 <= n1 && !feasible; ++a1)
        for (std::size_t a2 = 0; a2 <= n2; ++a2) {
            std::size_t base = a1 + 2 * a2;
            if (base > w) break;
            if ((w - base) % 4 == 0 && (w - base) / 4 <= n4) {
                feasible = true;
                break;
            }
        }
    if (!feasible)
        throw std::invalid_argument("weight not reachable as a union of orbits");

    while (true) {
        std::vector<bool> in(r, false);
        std::size_t total = 0;
        std::size_t misses = 0;
        while (total < w) {
            std::size_t m = std::size_t(rng.below(r));
            auto o = orbit(m, shape);
            if (in[o[0]] || total + o.size() > w) {
                // Restart once exact completion looks hopeless.
                if (++misses > 16 * r) break;
                continue;
            }
            for (auto x : o) in[x] = true;
            total += o.size();
        }
        if (total != w) continue;
        std::vector<std::uint32_t> coords;
        coords.reserve(w);
        for (std::size_t m = 0; m < r; ++m)
            if (in[m]) coords.push_back(std::uint32_t(m));
        return SparseSupport(r, std::move(coords));
    }
}

std::vector<std::uint32_t> sample_cyclosymmetric_error(const LayerShape& shape,
                                                       std::size_t n0, std::size_t w,
                                                       Rng& rng) {
    std::size_t r = shape.r();
    if (n0 < 1 || w < 1 || w > n0 * r)
        throw std::invalid_argument("target weight out of range");
    for (int restart = 0; restart < 100000; ++restart) {
        std::vector<bool> in(n0 * r, false);
        std::size_t total = 0;
        std::size_t misses = 0;
        bool stalled = false;
        while (total < w) {
            std::size_t b = std::size_t(rng.below(n0));
            auto o = orbit(std::size_t(rng.below(r)), shape);
            if (in[b * r + o[0]] || total + o.size() > w) {
                if (++misses > 16 * n0 * r) {
                    stalled = true;
                    break;
                }
                continue;
            }
            for (auto x : o) in[b * r + x] = true;
            total += o.size();
        }
        if (stalled) continue;
        std::vector<std::uint32_t> coords;
        coords.reserve(w);
        for (std::size_t j = 0; j < n0 * r; ++j)
            if (in[j]) coords.push_back(std::uint32_t(j));
        return coords;
    }
    throw std::invalid_argument("weight not reachable as a union of block orbits");
}

}  // namespace csmdpc
