#include <CLI11.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csmdpc/tuning.hpp"

using namespace csmdpc;

namespace {

// 0 success, 1 usage, 2 crypto failure, 3 I/O or parse error
struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(3, "cannot open " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw CliError(3, "read error on " + path);
    return data;
}

// Write-to-temp then rename so a failure never leaves a partial output.
void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CliError(3, "cannot create " + tmp);
        out.write(reinterpret_cast<const char*>(data.data()), long(data.size()));
        if (!out) throw CliError(3, "write error on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw CliError(3, "cannot rename " + tmp + " to " + path);
    }
}

ParameterSet load_params(const std::string& spec, bool qc) {
    ParameterSet p;
    if (auto preset = find_preset(spec)) {
        p = *preset;
    } else {
        std::ifstream in(spec);
        if (!in) throw CliError(1, "unknown preset and no such file: " + spec);
        nlohmann::json j;
        try {
            in >> j;
            p.id = j.value("id", std::string("custom"));
            p.n0 = j.value("n0", 2u);
            p.shape = LayerShape(j.at("layers").get<std::vector<std::uint32_t>>());
            p.d_v = j.at("d_v").get<std::size_t>();
            p.t = j.at("t").get<std::size_t>();
            p.theta0 = j.at("theta0").get<int>();
            p.delta = j.at("delta").get<int>();
        } catch (const std::exception& ex) {
            throw CliError(3, std::string("bad parameter file: ") + ex.what());
        }
        if (p.n0 < 2 || p.d_v == 0 || p.d_v > p.r() || p.t == 0 || p.t > p.n())
            throw CliError(3, "bad parameter file: implausible n0/d_v/t");
    }
    if (qc) p.mode = CodeMode::QC;
    return p;
}

int cmd_params() {
    std::printf("%-8s %-9s %5s %5s %5s %5s %9s %9s %9s\n", "id", "r", "d_v", "t",
                "theta0", "delta", "pk_bits", "ct_bits", "msg_bytes");
    for (const auto& p : presets()) {
        std::string shape;
        for (std::size_t i = 0; i < p.shape.num_layers(); ++i)
            shape += (i ? "x" : "") + std::to_string(p.shape.layer(i));
        std::printf("%-8s %-9s %5zu %5zu %5d %5d %9zu %9zu %9zu\n", p.id.c_str(),
                    shape.c_str(), p.d_v, p.t, p.theta0, p.delta, p.pk_bits(), p.r(),
                    cwe::message_capacity_bytes(p.n(), p.t));
    }
    return 0;
}

int cmd_keygen(const ParameterSet& params, std::uint64_t seed,
               const std::string& pk_path, const std::string& sk_path) {
    Rng rng(seed);
    KeyPair kp;
    try {
        kp = keygen(params, rng);
    } catch (const KeygenFailure& ex) {
        throw CliError(2, ex.what());
    }
    write_file(pk_path, serialize_pk(kp.pk));
    write_file(sk_path, serialize_sk(kp.sk));
    return 0;
}

int cmd_encrypt(const std::string& pk_path, const std::string& in_path,
                const std::string& out_path, bool random_error, std::uint64_t seed) {
    PublicKey pk;
    try {
        pk = deserialize_pk(read_file(pk_path));
    } catch (const ParseError& ex) {
        throw CliError(3, std::string("public key: ") + ex.what());
    }
    const auto& p = pk.params;
    ErrorVector e(p.n(), p.t);
    if (random_error) {
        Rng rng(seed);
        e = cwe::sample_error(p.n(), p.t, rng);
        // KEM-style: the shared error coordinates go to stdout
        for (std::size_t q = 0; q < e.weight(); ++q)
            std::printf("%s%u", q ? "," : "", e.coord(q));
        std::printf("\n");
    } else {
        auto msg = read_file(in_path);
        std::size_t cap = cwe::message_capacity_bytes(p.n(), p.t);
        // 2 of the capacity bytes carry the length prefix
        if (cap < 2 || msg.size() > cap - 2)
            throw CliError(1, "message exceeds usable capacity of " +
                                  std::to_string(cap < 2 ? 0 : cap - 2) + " bytes");
        e = cwe::unrank(cwe::encode_message(msg, p.n(), p.t), p.n(), p.t);
    }
    write_file(out_path, serialize_ct(p, encrypt(pk, e)));
    return 0;
}

int cmd_decrypt(const std::string& sk_path, const std::string& ct_path,
                const std::string& out_path, bool raw) {
    PrivateKey sk;
    ParameterSet cp;
    Cryptogram c;
    try {
        sk = deserialize_sk(read_file(sk_path));
        std::tie(cp, c) = deserialize_ct(read_file(ct_path));
    } catch (const ParseError& ex) {
        throw CliError(3, std::string("parse: ") + ex.what());
    }
    if (cp.shape != sk.params.shape || cp.t != sk.params.t || cp.n0 != sk.params.n0)
        throw CliError(3, "cryptogram parameters do not match the private key");

    // The public key is recomputable from the private blocks; decrypt needs it
    // only for the re-encryption check.
    PublicKey pk{sk.params, {}};
    try {
        DenseRingElement inv_last = invert(sk.blocks.back().densify());
        for (std::size_t i = 0; i + 1 < sk.params.n0; ++i)
            pk.blocks.push_back(mul_dense_sparse(inv_last, sk.blocks[i]));
    } catch (const NotInvertibleError&) {
        throw CliError(3, "private key is corrupt: last block not invertible");
    }

    auto dr = decrypt(sk, pk, c);
    if (dr.status != DecryptStatus::ok) throw CliError(2, "decryption failed");

    std::vector<std::uint8_t> out;
    if (raw) {
        std::string line;
        auto coords = dr.e.sorted_coords();
        for (std::size_t q = 0; q < coords.size(); ++q)
            line += (q ? "," : "") + std::to_string(coords[q]);
        line += "\n";
        out.assign(line.begin(), line.end());
    } else {
        try {
            out = cwe::decode_message(cwe::rank(dr.e, sk.params.t), sk.params.n(),
                                      sk.params.t);
        } catch (const std::invalid_argument&) {
            throw CliError(2, "decoded word carries no valid message encoding");
        }
    }
    write_file(out_path, out);
    return 0;
}

int cmd_estimate_theta(const ParameterSet& params, int codes, int errors,
                       std::uint64_t seed, const std::string& out_path) {
    auto est = tuning::estimate_theta0(params, codes, errors, seed);
    std::ostringstream os;
    os << "params_id,codes,errors_per_code,mean,stddev,theta0\n";
    os << params.id << ',' << codes << ',' << errors << ',' << est.mean << ','
       << est.stddev << ',' << est.rounded << '\n';
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        auto s = os.str();
        write_file(out_path, std::span(reinterpret_cast<const std::uint8_t*>(s.data()),
                                       s.size()));
    }
    return 0;
}

int cmd_tune_delta(const ParameterSet& params, std::vector<int> deltas, int trials,
                   std::uint64_t seed, const std::string& out_path) {
    if (deltas.empty())
        for (int d = 0; d <= params.delta; ++d) deltas.push_back(d);
    auto rows = tuning::tune_delta(params, deltas, trials, seed);
    std::ostringstream os;
    os << "params_id,delta,trials,failures,dfr,mean_iterations,mean_micros\n";
    for (const auto& row : rows)
        os << params.id << ',' << row.delta << ',' << row.trials << ',' << row.failures
           << ',' << row.dfr << ',' << row.mean_iterations << ',' << row.mean_micros
           << '\n';
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        auto s = os.str();
        write_file(out_path, std::span(reinterpret_cast<const std::uint8_t*>(s.data()),
                                       s.size()));
    }
    return 0;
}

int cmd_simulate(const ParameterSet& params, int trials, std::uint64_t seed, int jobs,
                 const std::string& out_path) {
    auto report = tuning::measure_dfr(params, trials, seed, 100, jobs);
    tuning::write_summary(std::cerr, report);
    if (out_path.empty()) {
        tuning::write_csv(std::cout, report);
    } else {
        std::ostringstream os;
        tuning::write_csv(os, report);
        auto s = os.str();
        write_file(out_path, std::span(reinterpret_cast<const std::uint8_t*>(s.data()),
                                       s.size()));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"code-based encryption with compact cyclosymmetric keys"};
    app.require_subcommand(1);

    std::string params_spec = "cs1-80", pk_path = "pk.bin", sk_path = "sk.bin";
    std::string in_path, out_path, ct_path = "ct.bin";
    std::uint64_t seed = 0;
    bool qc = false, random_error = false, raw = false;
    int trials = 1000, jobs = 1, codes = 10, errors = 100;
    std::vector<int> deltas;

    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--params", params_spec, "preset id or JSON parameter file");
        sub->add_flag("--qc", qc, "plain quasi-cyclic mode (dense public blocks)");
    };

    auto* kg = app.add_subcommand("keygen", "generate a key pair");
    add_params(kg);
    kg->add_option("--seed", seed, "RNG seed");
    kg->add_option("--pk", pk_path, "public key output path");
    kg->add_option("--sk", sk_path, "private key output path");

    auto* en = app.add_subcommand("encrypt", "encrypt a message (or a random error)");
    en->add_option("--pk", pk_path, "public key path")->required();
    en->add_option("--in", in_path, "message input path");
    en->add_option("--out", out_path, "cryptogram output path")->required();
    en->add_flag("--random-error", random_error, "sample a random weight-t error");
    en->add_option("--seed", seed, "RNG seed (with --random-error)");

    auto* de = app.add_subcommand("decrypt", "decrypt a cryptogram");
    de->add_option("--sk", sk_path, "private key path")->required();
    de->add_option("--ct", ct_path, "cryptogram path")->required();
    de->add_option("--out", out_path, "message output path")->required();
    de->add_flag("--raw", raw, "write error coordinates instead of message bytes");

    auto* et = app.add_subcommand("estimate-theta", "estimate the onset threshold");
    add_params(et);
    et->add_option("--seed", seed, "RNG seed");
    et->add_option("--codes", codes, "number of random codes");
    et->add_option("--errors-per-code", errors, "error patterns per code");
    et->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* td = app.add_subcommand("tune-delta", "evaluate threshold margins");
    add_params(td);
    td->add_option("--seed", seed, "RNG seed");
    td->add_option("--delta", deltas, "candidate margin (repeatable; default 0..preset)");
    td->add_option("--trials", trials, "trials per candidate");
    td->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* si = app.add_subcommand("simulate", "measure the decoding failure rate");
    add_params(si);
    si->add_option("--seed", seed, "RNG seed");
    si->add_option("--trials", trials, "number of round-trip trials");
    si->add_option("--jobs", jobs, "worker threads");
    si->add_option("--out", out_path, "CSV output path (default stdout)");

    app.add_subcommand("params", "list the tabled parameter sets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("params")) return cmd_params();
        if (app.got_subcommand("keygen"))
            return cmd_keygen(load_params(params_spec, qc), seed, pk_path, sk_path);
        if (app.got_subcommand("encrypt")) {
            if (!random_error && in_path.empty())
                throw CliError(1, "encrypt needs --in or --random-error");
            return cmd_encrypt(pk_path, in_path, out_path, random_error, seed);
        }
        if (app.got_subcommand("decrypt")) return cmd_decrypt(sk_path, ct_path, out_path, raw);
        if (app.got_subcommand("estimate-theta"))
            return cmd_estimate_theta(load_params(params_spec, qc), codes, errors, seed,
                                      out_path);
        if (app.got_subcommand("tune-delta"))
            return cmd_tune_delta(load_params(params_spec, qc), deltas, trials, seed,
                                  out_path);
        if (app.got_subcommand("simulate"))
            return cmd_simulate(load_params(params_spec, qc), trials, seed, jobs,
                                out_path);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
