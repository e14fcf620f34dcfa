#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csmdpc/cwe.hpp"
#include "csmdpc/cyclosym.hpp"
#include "csmdpc/decoder.hpp"
#include "csmdpc/ring.hpp"

namespace csmdpc {

struct ParameterSet {
    std::string id;          ///< preset name, or "custom"
    std::size_t n0 = 2;      ///< circulant block count
    LayerShape shape;        ///< r = prod p_i
    std::size_t d_v = 0;     ///< private column weight
    std::size_t t = 0;       ///< error weight
    int theta0 = 0;
    int delta = 0;
    std::string sec;         ///< security label, e.g. "2^80"; empty for custom
    CodeMode mode = CodeMode::CS;

    std::size_t r() const { return shape.r(); }
    std::size_t n() const { return n0 * r(); }
    /// Serialized public key payload in bits.
    std::size_t pk_bits() const {
        return (n0 - 1) * (mode == CodeMode::CS ? shape.compressed_bits() : r());
    }
    DecoderConfig decoder_config() const {
        return DecoderConfig::for_params(theta0, delta, t);
    }
};

/// Tabled presets: five 1-layer and five 2-layer parameter sets, n0 = 2.
const std::vector<ParameterSet>& presets();
/// Lookup by id (e.g. "cs1-80", "cs2-128"); nullopt when unknown.
std::optional<ParameterSet> find_preset(const std::string& id);

struct PrivateKey {
    ParameterSet params;
    std::vector<SparseSupport> blocks;  ///< n0 blocks of weight d_v
};

struct PublicKey {
    ParameterSet params;
    std::vector<DenseRingElement> blocks;  ///< n0-1 blocks K_i = h_{n0-1}^{-1} h_i
};

struct Cryptogram {
    DenseRingElement syndrome;  ///< r bits, c = e H_pub^T
};

class KeygenFailure : public std::runtime_error {
public:
    KeygenFailure() : std::runtime_error("keygen: retry budget exhausted") {}
};

struct KeyPair {
    PublicKey pk;
    PrivateKey sk;
};

/// Samples n0 sparse blocks of weight d_v (orbit-closed in CS mode); the last
/// block is resampled up to 100 times until invertible.
KeyPair keygen(const ParameterSet& params, Rng& rng);

/// c = e * H_pub^T for the systematic public matrix [cir(K_0)|...|I].
/// Requires wt(e) = t.
Cryptogram encrypt(const PublicKey& pk, const ErrorVector& e);

/// Same map without the weight precondition (oracle and test use).
Cryptogram public_syndrome(const PublicKey& pk, const ErrorVector& e);

/// s = H_{n0-1} c^T, the decodable private syndrome.
DenseRingElement private_syndrome(const PrivateKey& sk, const Cryptogram& c);

enum class DecryptStatus : std::uint8_t {
    ok,
    decoding_failure,      ///< decoder returned no error vector
    weight_mismatch,       ///< decoded weight != t
    verification_failure,  ///< re-encryption does not reproduce c
};

struct DecryptResult {
    DecryptStatus status = DecryptStatus::decoding_failure;
    ErrorVector e{0, 1};
    DecodeStats stats;
};

/// Decodes the private syndrome, then re-encrypts under pk to reject
/// miscorrections. pk must belong to sk.
DecryptResult decrypt(const PrivateKey& sk, const PublicKey& pk, const Cryptogram& c);

// --- serialization (formats are bit-exact; see README) -------------------

enum class ParseErrorKind : std::uint8_t {
    bad_magic,
    bad_kind,
    truncated,
    bad_parameters,
    nonzero_padding,
    coordinate_out_of_range,
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ParseErrorKind kind() const { return kind_; }

private:
    ParseErrorKind kind_;
};

std::vector<std::uint8_t> serialize_pk(const PublicKey& pk);
std::vector<std::uint8_t> serialize_sk(const PrivateKey& sk);
std::vector<std::uint8_t> serialize_ct(const ParameterSet& params, const Cryptogram& c);
PublicKey deserialize_pk(std::span<const std::uint8_t> data);
PrivateKey deserialize_sk(std::span<const std::uint8_t> data);
std::pair<ParameterSet, Cryptogram> deserialize_ct(std::span<const std::uint8_t> data);

}  // namespace csmdpc
