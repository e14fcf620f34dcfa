#include "csmdpc/kem.hpp"

#include <algorithm>
#include <cstring>

namespace csmdpc {

namespace {

ParameterSet make_preset(std::string id, std::vector<std::uint32_t> layers,
                         std::size_t d_v, std::size_t t, int theta0, int delta,
                         std::string sec) {
    ParameterSet p;
    p.id = std::move(id);
    p.n0 = 2;
    p.shape = LayerShape(std::move(layers));
    p.d_v = d_v;
    p.t = t;
    p.theta0 = theta0;
    p.delta = delta;
    p.sec = std::move(sec);
    return p;
}

}  // namespace

const std::vector<ParameterSet>& presets() {
    static const std::vector<ParameterSet> table = {
        make_preset("cs1-80", {4801}, 45, 84, 37, 9, "2^80"),
        make_preset("cs1-112", {7839}, 65, 117, 48, 4, "2^112"),
        make_preset("cs1-128", {9863}, 71, 134, 55, 5, "2^128"),
        make_preset("cs1-192", {20487}, 105, 198, 75, 8, "2^192"),
        make_preset("cs1-256", {32771}, 137, 264, 105, 10, "2^256"),
        make_preset("cs2-80", {61, 79}, 45, 84, 37, 9, "2^80"),
        make_preset("cs2-112", {47, 167}, 65, 117, 48, 4, "2^112"),
        make_preset("cs2-128", {71, 139}, 71, 134, 55, 5, "2^128"),
        make_preset("cs2-192", {103, 199}, 105, 198, 75, 8, "2^192"),
        make_preset("cs2-256", {73, 449}, 137, 264, 105, 10, "2^256"),
    };
    return table;
}

std::optional<ParameterSet> find_preset(const std::string& id) {
    for (const auto& p : presets())
        if (p.id == id) return p;
    return std::nullopt;
}

namespace {

SparseSupport sample_block(const ParameterSet& params, Rng& rng) {
    if (params.mode == CodeMode::CS)
        return sample_sparse_cyclosymmetric(params.shape, params.d_v, rng);
    auto e = cwe::sample_error(params.r(), params.d_v, rng);
    return SparseSupport(params.r(), e.coords());
}

}  // namespace

KeyPair keygen(const ParameterSet& params, Rng& rng) {
    std::vector<SparseSupport> blocks;
    for (std::size_t i = 0; i < params.n0; ++i) blocks.push_back(sample_block(params, rng));

    DenseRingElement inv_last(params.r());
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
        try {
            inv_last = invert(blocks.back().densify());
            ok = true;
            break;
        } catch (const NotInvertibleError&) {
            blocks.back() = sample_block(params, rng);
        }
    }
    if (!ok) throw KeygenFailure();

    PublicKey pk{params, {}};
    for (std::size_t i = 0; i + 1 < params.n0; ++i)
        pk.blocks.push_back(mul_dense_sparse(inv_last, blocks[i]));
    return KeyPair{std::move(pk), PrivateKey{params, std::move(blocks)}};
}

Cryptogram public_syndrome(const PublicKey& pk, const ErrorVector& e) {
    const std::size_t r = pk.params.r();
    const std::size_t n0 = pk.params.n0;
    if (e.n() != pk.params.n()) throw std::invalid_argument("error vector length != n");

    // Per-block sparse supports of e.
    std::vector<std::vector<std::uint32_t>> per_block(n0);
    for (std::size_t q = 0; q < e.weight(); ++q) {
        std::uint32_t j = e.coord(q);
        per_block[j / r].push_back(std::uint32_t(j % r));
    }

    DenseRingElement c(r);
    for (std::size_t b = 0; b + 1 < n0; ++b) {
        if (per_block[b].empty()) continue;
        // Column j of cir(K_b) is the j-rotation of K_b(x^-1).
        c = add(c, mul_dense_sparse(reverse(pk.blocks[b]),
                                    SparseSupport(r, std::move(per_block[b]))));
    }
    for (auto jr : per_block[n0 - 1]) c.flip(jr);  // identity block
    return Cryptogram{std::move(c)};
}

Cryptogram encrypt(const PublicKey& pk, const ErrorVector& e) {
    if (e.weight() != pk.params.t)
        throw std::invalid_argument("encrypt: error weight != t");
    return public_syndrome(pk, e);
}

DenseRingElement private_syndrome(const PrivateKey& sk, const Cryptogram& c) {
    if (c.syndrome.r() != sk.params.r())
        throw std::invalid_argument("cryptogram length != r");
    return mul_dense_sparse(c.syndrome, sk.blocks.back().reversed());
}

DecryptResult decrypt(const PrivateKey& sk, const PublicKey& pk, const Cryptogram& c) {
    const ParameterSet& params = sk.params;
    DecryptResult res;
    DenseRingElement s = private_syndrome(sk, c);
    ErrorVector e(params.n(), hdd_margin(params.t));
    DecodeStatus st = decode(sk.blocks, params.mode, s, e, params.t,
                             params.decoder_config(), &res.stats);
    if (st != DecodeStatus::success) {
        res.status = DecryptStatus::decoding_failure;
        return res;
    }
    if (e.weight() != params.t) {
        res.status = DecryptStatus::weight_mismatch;
        return res;
    }
    if (!(public_syndrome(pk, e).syndrome == c.syndrome)) {
        res.status = DecryptStatus::verification_failure;
        return res;
    }
    res.status = DecryptStatus::ok;
    res.e = std::move(e);
    return res;
}

// --- serialization --------------------------------------------------------

namespace {

constexpr std::uint8_t kMagic[8] = {'C', 'S', 'M', 'D', 'P', 'C', 0x00, 0x01};
constexpr std::uint8_t kKindPk = 0x01;
constexpr std::uint8_t kKindSk = 0x02;
constexpr std::uint8_t kKindCt = 0x03;
constexpr std::uint8_t kModeQcFlag = 0x80;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(std::uint8_t(v));
    out.push_back(std::uint8_t(v >> 8));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> d) : d_(d) {}
    std::uint8_t u8() {
        need(1);
        return d_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = std::uint16_t(d_[pos_] | d_[pos_ + 1] << 8);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(d_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto s = d_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    bool at_end() const { return pos_ == d_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > d_.size()) throw ParseError(ParseErrorKind::truncated, "truncated input");
    }
    std::span<const std::uint8_t> d_;
    std::size_t pos_ = 0;
};

void write_header(std::vector<std::uint8_t>& out, std::uint8_t kind,
                  const ParameterSet& p) {
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    out.push_back(std::uint8_t(kind | (p.mode == CodeMode::QC ? kModeQcFlag : 0)));
    put_u32(out, std::uint32_t(p.n0));
    put_u32(out, std::uint32_t(p.shape.num_layers()));
    for (std::size_t i = 0; i < p.shape.num_layers(); ++i) put_u32(out, p.shape.layer(i));
    put_u16(out, std::uint16_t(p.d_v));
    put_u16(out, std::uint16_t(p.t));
    put_u16(out, std::uint16_t(p.theta0));
    put_u16(out, std::uint16_t(p.delta));
}

ParameterSet read_header(Reader& rd, std::uint8_t expected_kind) {
    for (auto m : kMagic)
        if (rd.u8() != m) throw ParseError(ParseErrorKind::bad_magic, "bad magic/version");
    std::uint8_t kind = rd.u8();
    if ((kind & ~kModeQcFlag) != expected_kind)
        throw ParseError(ParseErrorKind::bad_kind, "unexpected file kind");
    ParameterSet p;
    p.mode = (kind & kModeQcFlag) ? CodeMode::QC : CodeMode::CS;
    p.n0 = rd.u32();
    std::uint32_t layers = rd.u32();
    if (p.n0 < 2 || layers < 1 || layers > 2)
        throw ParseError(ParseErrorKind::bad_parameters, "bad n0 or layer count");
    std::vector<std::uint32_t> ps;
    for (std::uint32_t i = 0; i < layers; ++i) ps.push_back(rd.u32());
    try {
        p.shape = LayerShape(std::move(ps));
    } catch (const std::invalid_argument& ex) {
        throw ParseError(ParseErrorKind::bad_parameters, ex.what());
    }
    p.d_v = rd.u16();
    p.t = rd.u16();
    p.theta0 = rd.u16();
    p.delta = rd.u16();
    if (p.d_v == 0 || p.d_v > p.r() || p.t == 0 || p.t > p.n())
        throw ParseError(ParseErrorKind::bad_parameters, "bad d_v or t");
    // Recover the preset id when the numbers match a tabled set.
    p.id = "custom";
    for (const auto& q : presets()) {
        if (q.shape == p.shape && q.d_v == p.d_v && q.t == p.t && q.theta0 == p.theta0 &&
            q.delta == p.delta && q.n0 == p.n0) {
            p.id = q.id;
            p.sec = q.sec;
            break;
        }
    }
    return p;
}

void check_done(const Reader& rd) {
    if (!rd.at_end())
        throw ParseError(ParseErrorKind::truncated, "trailing bytes after payload");
}

}  // namespace

std::vector<std::uint8_t> serialize_pk(const PublicKey& pk) {
    std::vector<std::uint8_t> out;
    write_header(out, kKindPk, pk.params);
    for (const auto& blk : pk.blocks) {
        if (pk.params.mode == CodeMode::CS) {
            auto c = compress(blk, pk.params.shape);
            out.insert(out.end(), c.bytes.begin(), c.bytes.end());
        } else {
            auto b = blk.to_bytes();
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    return out;
}

PublicKey deserialize_pk(std::span<const std::uint8_t> data) {
    Reader rd(data);
    ParameterSet p = read_header(rd, kKindPk);
    PublicKey pk{p, {}};
    for (std::size_t i = 0; i + 1 < p.n0; ++i) {
        try {
            if (p.mode == CodeMode::CS) {
                auto raw = rd.bytes((p.shape.compressed_bits() + 7) / 8);
                pk.blocks.push_back(expand(compressed_from_bytes(p.shape, raw)));
            } else {
                auto raw = rd.bytes((p.r() + 7) / 8);
                pk.blocks.push_back(DenseRingElement::from_bytes(p.r(), raw));
            }
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ParseErrorKind::nonzero_padding, ex.what());
        }
    }
    check_done(rd);
    return pk;
}

std::vector<std::uint8_t> serialize_sk(const PrivateKey& sk) {
    std::vector<std::uint8_t> out;
    write_header(out, kKindSk, sk.params);
    for (const auto& blk : sk.blocks)
        for (auto c : blk.support) put_u32(out, c);
    return out;
}

PrivateKey deserialize_sk(std::span<const std::uint8_t> data) {
    Reader rd(data);
    ParameterSet p = read_header(rd, kKindSk);
    PrivateKey sk{p, {}};
    for (std::size_t b = 0; b < p.n0; ++b) {
        std::vector<std::uint32_t> coords;
        for (std::size_t i = 0; i < p.d_v; ++i) {
            std::uint32_t c = rd.u32();
            if (c >= p.r())
                throw ParseError(ParseErrorKind::coordinate_out_of_range,
                                 "support coordinate >= r");
            if (!coords.empty() && c <= coords.back())
                throw ParseError(ParseErrorKind::coordinate_out_of_range,
                                 "support coordinates not strictly increasing");
            coords.push_back(c);
        }
        sk.blocks.emplace_back(p.r(), std::move(coords));
    }
    check_done(rd);
    return sk;
}

std::vector<std::uint8_t> serialize_ct(const ParameterSet& params, const Cryptogram& c) {
    std::vector<std::uint8_t> out;
    write_header(out, kKindCt, params);
    auto b = c.syndrome.to_bytes();
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::pair<ParameterSet, Cryptogram> deserialize_ct(std::span<const std::uint8_t> data) {
    Reader rd(data);
    ParameterSet p = read_header(rd, kKindCt);
    auto raw = rd.bytes((p.r() + 7) / 8);
    DenseRingElement s(p.r());
    try {
        s = DenseRingElement::from_bytes(p.r(), raw);
    } catch (const std::invalid_argument& ex) {
        throw ParseError(ParseErrorKind::nonzero_padding, ex.what());
    }
    check_done(rd);
    return {p, Cryptogram{std::move(s)}};
}

}  // namespace csmdpc
