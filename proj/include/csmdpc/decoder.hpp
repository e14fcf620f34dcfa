#pragma once

#include <cstdint>
#include <span>

#include "csmdpc/cwe.hpp"
#include "csmdpc/ring.hpp"

namespace csmdpc {

/// Direction of the column-support index map. A palindromic (cyclosymmetric)
/// block's support is negation-invariant, so the additive form the constrained
/// decoder uses coincides with the true column map (j - L[z]) mod r; plain QC
/// keys need the subtractive form.
enum class CodeMode : std::uint8_t { CS = 0, QC = 1 };

inline std::size_t hdd_margin(std::size_t t) { return 3 * t / 2; }

struct DecoderConfig {
    int theta0 = 0;       ///< initial unsatisfied-check threshold estimate
    int delta = 0;        ///< threshold margin; decremented on failed attempts
    int iter_bound = 0;   ///< iterations per attempt (heuristic default t)
    std::size_t margin = 0;  ///< spurious-error capacity, floor(3t/2)

    static DecoderConfig for_params(int theta0, int delta, std::size_t t) {
        return DecoderConfig{theta0, delta, int(t), hdd_margin(t)};
    }
};

struct DecodeStats {
    int iterations = 0;       ///< total inner iterations across attempts
    int restarts = 0;         ///< failed attempts that decremented delta
    int final_delta = 0;
    std::size_t peak_weight = 0;  ///< max provisional wt(e) observed
};

enum class DecodeStatus : std::uint8_t { success, failure };

/// Per-pass hook for the syndrome-consistency debug invariant. Called after
/// every full variable pass with the current syndrome and provisional error
/// vector; may allocate (debug only).
struct DecodeObserver {
    virtual ~DecodeObserver() = default;
    virtual void after_pass(const DenseRingElement& s, const ErrorVector& e) = 0;
};

/// Constrained-memory hard-decision decoder with on-the-fly counters.
///
/// s and e are caller-owned and mutated in place; e must have capacity
/// cfg.margin and be empty on entry. Beyond them the working state is a
/// constant number of scalars; nothing proportional to n or r is allocated.
/// Never throws on decoding failure: exhausting every delta level returns a
/// failure status (s then holds the last attempt's residue).
DecodeStatus decode(std::span<const SparseSupport> blocks, CodeMode mode,
                    DenseRingElement& s, ErrorVector& e, std::size_t t,
                    const DecoderConfig& cfg, DecodeStats* stats = nullptr,
                    DecodeObserver* observer = nullptr);

/// Textbook two-pass Gallager bit-flipping decoder with a full counter array.
/// Test oracle only; takes O(n) ancillary storage by construction.
DecodeStatus reference_bitflip(std::span<const SparseSupport> blocks, CodeMode mode,
                               const DenseRingElement& s_in, ErrorVector& e,
                               std::size_t t, int iter_bound);

/// Max over all n variables of the count of unsatisfied parity checks, i.e.
/// the quantity the onset threshold theta_0 estimates.
int max_unsat_count(std::span<const SparseSupport> blocks, CodeMode mode,
                    const DenseRingElement& s);

}  // namespace csmdpc
