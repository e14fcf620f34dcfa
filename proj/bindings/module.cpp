#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csmdpc/tuning.hpp"

namespace py = pybind11;
using namespace csmdpc;

namespace {

py::bytes to_py(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_py(const py::bytes& b) {
    std::string s = b;
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

ParameterSet resolve(const py::object& params) {
    if (py::isinstance<py::str>(params)) {
        auto id = params.cast<std::string>();
        if (auto p = find_preset(id)) return *p;
        throw py::value_error("unknown preset: " + id);
    }
    return params.cast<ParameterSet>();
}

mpz_class mpz_from_int(const py::int_& v) {
    return mpz_class(py::str(v).cast<std::string>());
}

py::int_ int_from_mpz(const mpz_class& m) {
    return py::cast<py::int_>(
        py::module_::import("builtins").attr("int")(m.get_str()));
}

PublicKey pk_from_sk(const PrivateKey& sk) {
    PublicKey pk{sk.params, {}};
    DenseRingElement inv_last = invert(sk.blocks.back().densify());
    for (std::size_t i = 0; i + 1 < sk.params.n0; ++i)
        pk.blocks.push_back(mul_dense_sparse(inv_last, sk.blocks[i]));
    return pk;
}

DecryptResult decrypt_bytes(const py::bytes& sk_bytes, const py::bytes& ct_bytes) {
    PrivateKey sk = deserialize_sk(from_py(sk_bytes));
    auto [cp, c] = deserialize_ct(from_py(ct_bytes));
    if (!(cp.shape == sk.params.shape) || cp.t != sk.params.t || cp.n0 != sk.params.n0)
        throw py::value_error("cryptogram parameters do not match the private key");
    auto dr = decrypt(sk, pk_from_sk(sk), c);
    if (dr.status != DecryptStatus::ok) throw std::runtime_error("decryption failed");
    return dr;
}

}  // namespace

PYBIND11_MODULE(_csmdpc, m) {
    m.doc() = "code-based encryption with compact cyclosymmetric keys";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<NotInvertibleError>(m, "NotInvertibleError", PyExc_ValueError);

    py::enum_<CodeMode>(m, "CodeMode")
        .value("CS", CodeMode::CS)
        .value("QC", CodeMode::QC);

    py::class_<ParameterSet>(m, "ParameterSet")
        .def_readonly("id", &ParameterSet::id)
        .def_readonly("n0", &ParameterSet::n0)
        .def_readonly("d_v", &ParameterSet::d_v)
        .def_readonly("t", &ParameterSet::t)
        .def_readonly("theta0", &ParameterSet::theta0)
        .def_readonly("delta", &ParameterSet::delta)
        .def_readonly("sec", &ParameterSet::sec)
        .def_readonly("mode", &ParameterSet::mode)
        .def_property_readonly("layers",
                               [](const ParameterSet& p) {
                                   std::vector<std::uint32_t> v;
                                   for (std::size_t i = 0; i < p.shape.num_layers(); ++i)
                                       v.push_back(p.shape.layer(i));
                                   return v;
                               })
        .def_property_readonly("r", &ParameterSet::r)
        .def_property_readonly("n", &ParameterSet::n)
        .def_property_readonly("pk_bits", &ParameterSet::pk_bits)
        .def_property_readonly("message_capacity",
                               [](const ParameterSet& p) {
                                   return cwe::message_capacity_bytes(p.n(), p.t);
                               })
        .def("__repr__", [](const ParameterSet& p) {
            return "ParameterSet(id='" + p.id + "', r=" + std::to_string(p.r()) + ")";
        });

    m.def("presets", &presets, "the ten tabled parameter sets");
    m.def("find_preset", &find_preset, py::arg("id"));
    m.def(
        "custom_params",
        [](std::vector<std::uint32_t> layers, std::size_t d_v, std::size_t t,
           int theta0, int delta, bool qc) {
            ParameterSet p;
            p.id = "custom";
            p.n0 = 2;
            p.shape = LayerShape(std::move(layers));
            p.d_v = d_v;
            p.t = t;
            p.theta0 = theta0;
            p.delta = delta;
            p.mode = qc ? CodeMode::QC : CodeMode::CS;
            if (d_v == 0 || d_v > p.r() || t == 0 || t > p.n())
                throw py::value_error("implausible d_v or t");
            return p;
        },
        py::arg("layers"), py::arg("d_v"), py::arg("t"), py::arg("theta0"),
        py::arg("delta"), py::arg("qc") = false);

    m.def(
        "keygen",
        [](const py::object& params, std::uint64_t seed) {
            Rng rng(seed);
            auto kp = keygen(resolve(params), rng);
            return py::make_tuple(to_py(serialize_pk(kp.pk)), to_py(serialize_sk(kp.sk)));
        },
        py::arg("params"), py::arg("seed"),
        "returns (public_key_bytes, private_key_bytes)");

    m.def(
        "encrypt",
        [](const py::bytes& pk_bytes, const py::bytes& message) {
            PublicKey pk = deserialize_pk(from_py(pk_bytes));
            const auto& p = pk.params;
            auto msg = from_py(message);
            std::size_t cap = cwe::message_capacity_bytes(p.n(), p.t);
            // 2 of the capacity bytes carry the length prefix
            if (cap < 2 || msg.size() > cap - 2)
                throw py::value_error("message exceeds usable capacity of " +
                                      std::to_string(cap < 2 ? 0 : cap - 2) + " bytes");
            auto e = cwe::unrank(cwe::encode_message(msg, p.n(), p.t), p.n(), p.t);
            return to_py(serialize_ct(p, encrypt(pk, e)));
        },
        py::arg("public_key"), py::arg("message"));

    m.def(
        "encrypt_random",
        [](const py::bytes& pk_bytes, std::uint64_t seed) {
            PublicKey pk = deserialize_pk(from_py(pk_bytes));
            const auto& p = pk.params;
            Rng rng(seed);
            auto e = cwe::sample_error(p.n(), p.t, rng);
            return py::make_tuple(to_py(serialize_ct(p, encrypt(pk, e))),
                                  e.sorted_coords());
        },
        py::arg("public_key"), py::arg("seed"),
        "KEM-style: returns (cryptogram_bytes, error_coordinates)");

    m.def(
        "decrypt",
        [](const py::bytes& sk_bytes, const py::bytes& ct_bytes) {
            auto dr = decrypt_bytes(sk_bytes, ct_bytes);
            PrivateKey sk = deserialize_sk(from_py(sk_bytes));
            return to_py(cwe::decode_message(cwe::rank(dr.e, sk.params.t),
                                             sk.params.n(), sk.params.t));
        },
        py::arg("private_key"), py::arg("cryptogram"), "returns the message bytes");

    m.def(
        "decrypt_error",
        [](const py::bytes& sk_bytes, const py::bytes& ct_bytes) {
            return decrypt_bytes(sk_bytes, ct_bytes).e.sorted_coords();
        },
        py::arg("private_key"), py::arg("cryptogram"),
        "returns the sorted error coordinates");

    m.def(
        "public_key_from_private", [](const py::bytes& sk_bytes) {
            return to_py(serialize_pk(pk_from_sk(deserialize_sk(from_py(sk_bytes)))));
        },
        py::arg("private_key"));

    // constant-weight encoding
    m.def(
        "unrank",
        [](const py::int_& index, std::size_t n, std::size_t t) {
            mpz_class v = mpz_from_int(index);
            if (v < 0 || v >= cwe::binomial(unsigned(n), unsigned(t)))
                throw py::value_error("index out of range");
            return cwe::unrank(v, n, t).sorted_coords();
        },
        py::arg("index"), py::arg("n"), py::arg("t"));
    m.def(
        "rank",
        [](const std::vector<std::uint32_t>& coords, std::size_t n, std::size_t t) {
            ErrorVector e(n, t);
            for (auto c : coords) {
                if (c >= n) throw py::value_error("coordinate out of range");
                e.push(c);
            }
            return int_from_mpz(cwe::rank(e, t));
        },
        py::arg("coords"), py::arg("n"), py::arg("t"));
    m.def("binomial", [](unsigned long n, unsigned long k) {
        return int_from_mpz(cwe::binomial(n, k));
    });

    // ring operations on byte-serialized elements (bit j at byte j/8, bit j%8)
    m.def(
        "ring_mul",
        [](std::size_t r, const py::bytes& a, const py::bytes& b) {
            auto da = DenseRingElement::from_bytes(r, from_py(a));
            auto db = DenseRingElement::from_bytes(r, from_py(b));
            return to_py(mul_schoolbook(da, db).to_bytes());
        },
        py::arg("r"), py::arg("a"), py::arg("b"));
    m.def(
        "ring_invert",
        [](std::size_t r, const py::bytes& a) {
            return to_py(invert(DenseRingElement::from_bytes(r, from_py(a))).to_bytes());
        },
        py::arg("r"), py::arg("a"));

    // tuning
    m.def(
        "estimate_theta0",
        [](const py::object& params, int codes, int errors_per_code,
           std::uint64_t seed) {
            auto est = tuning::estimate_theta0(resolve(params), codes, errors_per_code,
                                               seed);
            py::dict d;
            d["mean"] = est.mean;
            d["stddev"] = est.stddev;
            d["theta0"] = est.rounded;
            return d;
        },
        py::arg("params"), py::arg("codes") = 10, py::arg("errors_per_code") = 100,
        py::arg("seed") = 0);
    m.def(
        "measure_dfr",
        [](const py::object& params, int trials, std::uint64_t seed, int trials_per_key,
           int jobs) {
            auto rep = tuning::measure_dfr(resolve(params), trials, seed,
                                           trials_per_key, jobs);
            py::dict d;
            d["params_id"] = rep.params_id;
            d["trials"] = rep.trials;
            d["successes"] = rep.successes;
            d["dfr"] = rep.dfr;
            d["theta0_mean"] = rep.theta0_mean;
            d["theta0_stddev"] = rep.theta0_stddev;
            d["iteration_histogram"] = rep.iteration_histogram;
            return d;
        },
        py::arg("params"), py::arg("trials"), py::arg("seed") = 0,
        py::arg("trials_per_key") = 100, py::arg("jobs") = 1);
}
