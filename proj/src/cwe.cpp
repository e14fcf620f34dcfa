#include "csmdpc/cwe.hpp"

#include <algorithm>
#include <stdexcept>

namespace csmdpc {

std::vector<std::uint32_t> ErrorVector::sorted_coords() const {
    std::vector<std::uint32_t> out = coords_;
    std::sort(out.begin(), out.end());
    return out;
}

namespace cwe {

mpz_class binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

ErrorVector unrank(const mpz_class& m, std::size_t n, std::size_t t) {
    if (t > n) throw std::invalid_argument("unrank: t > n");
    if (m < 0 || m >= binomial(n, t)) throw std::invalid_argument("unrank: m out of range");
    ErrorVector e(n, t);
    if (t == 0) return e;
    mpz_class rem = m;
    mpz_class b = binomial(n - 1, t);  // C(c, k) for the current c, k
    std::size_t k = t;
    for (std::size_t c = n; c-- > 0 && k > 0;) {
        if (rem >= b) {
            rem -= b;
            e.push(std::uint32_t(c));
            if (c > 0) {
                b *= k;  // C(c-1, k-1) = C(c, k) * k / c
                mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), c);
            }
            --k;
        } else if (c > 0) {
            b *= c - k;  // C(c-1, k) = C(c, k) * (c-k) / c
            mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), c);
        }
    }
    return e;
}

mpz_class rank(const ErrorVector& e, std::size_t t) {
    if (e.weight() != t) throw std::invalid_argument("rank: weight != t");
    mpz_class m = 0;
    auto coords = e.sorted_coords();
    for (std::size_t i = 0; i < coords.size(); ++i)
        m += binomial(coords[i], i + 1);
    return m;
}

ErrorVector sample_error(std::size_t n, std::size_t t, Rng& rng) {
    if (t > n) throw std::invalid_argument("sample_error: t > n");
    // Partial Fisher-Yates over an index array.
    std::vector<std::uint32_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = std::uint32_t(i);
    ErrorVector e(n, t == 0 ? 1 : t);
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t j = i + std::size_t(rng.below(n - i));
        std::swap(idx[i], idx[j]);
        e.push(idx[i]);
    }
    return e;
}

std::size_t message_capacity_bytes(std::size_t n, std::size_t t) {
    mpz_class c = binomial(n, t);
    std::size_t bitlen = mpz_sizeinbase(c.get_mpz_t(), 2);  // floor(lg c) + 1
    if (bitlen < 2) return 0;
    return (bitlen - 2) / 8;
}

mpz_class encode_message(const std::vector<std::uint8_t>& msg, std::size_t n,
                         std::size_t t) {
    std::size_t cap = message_capacity_bytes(n, t);
    if (cap < 2 || msg.size() > cap - 2)
        throw std::invalid_argument("message too long for parameter set");
    mpz_class v = 0;
    for (auto b : msg) {
        v <<= 8;
        v += b;
    }
    // Length field in the low 16 bits, little-endian byte order.
    v <<= 16;
    v += (msg.size() & 0xff) << 8 | (msg.size() >> 8);
    return v;
}

std::vector<std::uint8_t> decode_message(const mpz_class& m, std::size_t n,
                                         std::size_t t) {
    mpz_class v = m;
    unsigned long lenfield = mpz_class(v & 0xffff).get_ui();
    std::size_t len = (lenfield >> 8) | ((lenfield & 0xff) << 8);
    v >>= 16;
    std::size_t cap = message_capacity_bytes(n, t);
    if (cap < 2 || len > cap - 2)
        throw std::invalid_argument("decoded length field out of range");
    std::vector<std::uint8_t> out(len, 0);
    for (std::size_t i = len; i-- > 0;) {
        out[i] = std::uint8_t(mpz_class(v & 0xff).get_ui());
        v >>= 8;
    }
    if (v != 0) throw std::invalid_argument("decoded integer exceeds stated length");
    return out;
}

}  // namespace cwe
}  // namespace csmdpc
