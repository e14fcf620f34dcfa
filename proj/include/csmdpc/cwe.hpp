#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "csmdpc/rng.hpp"

namespace csmdpc {

/// Weight-bounded word of length n as an unsorted coordinate list. capacity
/// is fixed at construction; the decoder relies on push/swap-remove never
/// reallocating.
class ErrorVector {
public:
    ErrorVector(std::size_t n, std::size_t capacity) : n_(n) {
        coords_.reserve(capacity);
        cap_ = capacity;
    }

    std::size_t n() const { return n_; }
    std::size_t capacity() const { return cap_; }
    std::size_t weight() const { return coords_.size(); }
    std::uint32_t coord(std::size_t q) const { return coords_[q]; }

    bool full() const { return coords_.size() == cap_; }
    void push(std::uint32_t j) { coords_.push_back(j); }
    /// Swap-delete of slot q.
    void remove_at(std::size_t q) {
        coords_[q] = coords_.back();
        coords_.pop_back();
    }
    void clear() { coords_.clear(); }

    /// Linear scan; the target weight is small by design.
    long find(std::uint32_t j) const {
        for (std::size_t q = 0; q < coords_.size(); ++q)
            if (coords_[q] == j) return long(q);
        return -1;
    }

    std::vector<std::uint32_t> sorted_coords() const;
    const std::vector<std::uint32_t>& coords() const { return coords_; }

private:
    std::size_t n_;
    std::size_t cap_;
    std::vector<std::uint32_t> coords_;
};

namespace cwe {

/// Exact C(n, k); 0 when k > n.
mpz_class binomial(unsigned long n, unsigned long k);

/// Colexicographic combinadic unranking: m in [0, C(n,t)) to the weight-t
/// word of colex rank m.
ErrorVector unrank(const mpz_class& m, std::size_t n, std::size_t t);

/// Inverse of unrank; requires wt(e) = t.
mpz_class rank(const ErrorVector& e, std::size_t t);

/// Uniform weight-t word by coordinate rejection.
ErrorVector sample_error(std::size_t n, std::size_t t, Rng& rng);

/// Usable byte capacity floor((floor(lg C(n,t)) - 1) / 8) of one cryptogram.
std::size_t message_capacity_bytes(std::size_t n, std::size_t t);

/// Byte-string convenience layer: 2-byte little-endian length prefix plus the
/// message, injected big-endian as an integer below C(n,t).
mpz_class encode_message(const std::vector<std::uint8_t>& msg, std::size_t n,
                         std::size_t t);
std::vector<std::uint8_t> decode_message(const mpz_class& m, std::size_t n,
                                         std::size_t t);

}  // namespace cwe
}  // namespace csmdpc
