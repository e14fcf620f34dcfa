#include "csmdpc/decoder.hpp"

#include <stdexcept>
#include <vector>

namespace csmdpc {

namespace {

// Syndrome row hit by variable j (within-block index jr) and support entry c.
// Index arithmetic by conditional subtraction; arguments are < 2r.
inline std::size_t row_of(std::size_t jr, std::uint32_t c, std::size_t r,
                          CodeMode mode) {
    std::size_t i = mode == CodeMode::CS ? jr + c : jr + (r - c);
    if (i >= r) i -= r;
    return i;
}

inline void flip_column(DenseRingElement& s, const SparseSupport& block,
                        std::size_t jr, CodeMode mode) {
    for (std::uint32_t c : block.support) s.flip(row_of(jr, c, s.r(), mode));
}

}  // namespace

int max_unsat_count(std::span<const SparseSupport> blocks, CodeMode mode,
                    const DenseRingElement& s) {
    std::size_t r = s.r();
    int best = 0;
    for (const auto& block : blocks) {
        for (std::size_t jr = 0; jr < r; ++jr) {
            int unsat = 0;
            for (std::uint32_t c : block.support)
                unsat += int(s.get(row_of(jr, c, r, mode)));
            if (unsat > best) best = unsat;
        }
    }
    return best;
}

DecodeStatus decode(std::span<const SparseSupport> blocks, CodeMode mode,
                    DenseRingElement& s, ErrorVector& e, std::size_t t,
                    const DecoderConfig& cfg, DecodeStats* stats,
                    DecodeObserver* observer) {
    const std::size_t r = s.r();
    const std::size_t n0 = blocks.size();
    if (e.weight() != 0) throw std::invalid_argument("decode: e must start empty");
    if (e.capacity() < cfg.margin)
        throw std::invalid_argument("decode: e capacity below hdd margin");

    int delta = cfg.delta;
    int iterations_total = 0;
    int restarts = 0;
    std::size_t peak = 0;

    bool retry;
    do {
        retry = false;
        e.clear();
        int iter = 0;
        int theta = cfg.theta0;
        do {
            int newmax = 0;
            for (std::size_t b = 0; b < n0; ++b) {
                const SparseSupport& block = blocks[b];
                bool overflow = false;
                for (std::size_t jr = 0; jr < r; ++jr) {
                    int unsat = 0;
                    for (std::uint32_t c : block.support)
                        unsat += int(s.get(row_of(jr, c, r, mode)));
                    if (unsat > newmax) newmax = unsat;
                    if (unsat >= theta - delta) {
                        std::uint32_t j = std::uint32_t(b * r + jr);
                        long q = e.find(j);
                        if (q >= 0) {
                            e.remove_at(std::size_t(q));
                        } else if (!e.full()) {
                            e.push(j);
                            if (e.weight() > peak) peak = e.weight();
                        } else {
                            overflow = true;  // too many spurious errors
                            break;
                        }
                        flip_column(s, block, jr, mode);
                    }
                }
                if (overflow) break;
            }
            theta = newmax;
            ++iter;
            ++iterations_total;
            if (observer) observer->after_pass(s, e);
        } while (s.weight() != 0 && iter < cfg.iter_bound);

        if ((s.weight() != 0 || e.weight() > t) && delta > 0) {
            --delta;
            ++restarts;
            // Revert the syndrome to its original form by re-flipping every
            // column the failed attempt touched an odd number of times.
            for (std::size_t q = 0; q < e.weight(); ++q) {
                std::uint32_t j = e.coord(q);
                flip_column(s, blocks[j / r], j % r, mode);
            }
            retry = true;
        }
    } while (retry);

    bool ok = s.weight() == 0 && e.weight() <= t;
    if (stats) {
        stats->iterations = iterations_total;
        stats->restarts = restarts;
        stats->final_delta = delta;
        stats->peak_weight = peak;
    }
    return ok ? DecodeStatus::success : DecodeStatus::failure;
}

DecodeStatus reference_bitflip(std::span<const SparseSupport> blocks, CodeMode mode,
                               const DenseRingElement& s_in, ErrorVector& e,
                               std::size_t t, int iter_bound) {
    const std::size_t r = s_in.r();
    const std::size_t n = blocks.size() * r;
    DenseRingElement s = s_in;
    std::vector<std::uint8_t> flipped(n, 0);
    std::vector<int> counters(n, 0);

    for (int iter = 0; iter < iter_bound && s.weight() != 0; ++iter) {
        int maxcount = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const SparseSupport& block = blocks[j / r];
            int unsat = 0;
            for (std::uint32_t c : block.support)
                unsat += int(s.get(row_of(j % r, c, r, mode)));
            counters[j] = unsat;
            if (unsat > maxcount) maxcount = unsat;
        }
        if (maxcount == 0) break;
        for (std::size_t j = 0; j < n; ++j) {
            if (counters[j] != maxcount) continue;
            flipped[j] ^= 1;
            flip_column(s, blocks[j / r], j % r, mode);
        }
    }

    e.clear();
    std::size_t w = 0;
    for (std::size_t j = 0; j < n; ++j) w += flipped[j];
    if (s.weight() != 0 || w > t || w > e.capacity()) return DecodeStatus::failure;
    for (std::size_t j = 0; j < n; ++j)
        if (flipped[j]) e.push(std::uint32_t(j));
    return DecodeStatus::success;
}

}  // namespace csmdpc
