#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csmdpc/ring.hpp"
#include "csmdpc/rng.hpp"

using namespace csmdpc;

namespace {

DenseRingElement from_support(std::size_t r, std::initializer_list<std::uint32_t> s) {
    DenseRingElement a(r);
    for (auto c : s) a.set(c, true);
    return a;
}

DenseRingElement random_element(std::size_t r, Rng& rng) {
    DenseRingElement a(r);
    for (std::size_t j = 0; j < r; ++j)
        if (rng.next() & 1) a.set(j, true);
    return a;
}

SparseSupport random_support(std::size_t r, std::size_t w, Rng& rng) {
    std::vector<std::uint32_t> coords;
    while (coords.size() < w) {
        auto c = std::uint32_t(rng.below(r));
        bool dup = false;
        for (auto x : coords) dup |= (x == c);
        if (!dup) coords.push_back(c);
    }
    return SparseSupport(r, std::move(coords));
}

}  // namespace

TEST_CASE("add: characteristic 2 and identity") {
    Rng rng(1);
    auto a = random_element(31, rng);
    CHECK(add(a, a).is_zero());
    CHECK(add(a, DenseRingElement(31)) == a);
    auto x = from_support(7, {0, 1});
    auto y = from_support(7, {1, 3});
    CHECK(add(x, y) == from_support(7, {0, 3}));
}

TEST_CASE("mul_dense_sparse: identity and monomial shift") {
    Rng rng(2);
    auto a = random_element(31, rng);
    CHECK(mul_dense_sparse(a, SparseSupport(31, {0})) == a);
    auto shifted = mul_dense_sparse(a, SparseSupport(31, {5}));
    for (std::size_t j = 0; j < 31; ++j)
        CHECK(shifted.get(j) == a.get((j + 31 - 5) % 31));
}

TEST_CASE("mul_dense_sparse matches schoolbook convolution oracle") {
    auto a = from_support(7, {0, 1, 3});
    SparseSupport b(7, {0, 2});
    CHECK(mul_dense_sparse(a, b) == mul_schoolbook(a, b.densify()));

    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t r = trial % 2 ? 31 : 101;
        auto x = random_element(r, rng);
        auto s = random_support(r, 1 + rng.below(8), rng);
        CHECK(mul_dense_sparse(x, s) == mul_schoolbook(x, s.densify()));
    }
}

TEST_CASE("mul_sparse_sparse: identities and dense-path agreement") {
    CHECK(mul_sparse_sparse(SparseSupport(7, {0}), SparseSupport(7, {0})) ==
          DenseRingElement::one(7));
    // x * x^(r-1) = x^r = 1
    CHECK(mul_sparse_sparse(SparseSupport(7, {1}), SparseSupport(7, {6})) ==
          DenseRingElement::one(7));
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_support(31, 1 + rng.below(6), rng);
        auto b = random_support(31, 1 + rng.below(6), rng);
        CHECK(mul_sparse_sparse(a, b) == mul_dense_sparse(a.densify(), b));
    }
}

TEST_CASE("rotate: group law") {
    Rng rng(5);
    auto a = random_element(101, rng);
    CHECK(rotate(a, 0) == a);
    CHECK(rotate(a, 101) == a);
    CHECK(rotate(rotate(a, 17), 40) == rotate(a, 57));
    CHECK(rotate(rotate(a, 60), 80) == rotate(a, 140 % 101));
}

TEST_CASE("weight") {
    CHECK(DenseRingElement(31).weight() == 0);
    CHECK(DenseRingElement::one(31).weight() == 1);
    Rng rng(6);
    auto s = random_support(101, 9, rng);
    CHECK(s.densify().weight() == 9);
}

TEST_CASE("ring laws at small r") {
    Rng rng(7);
    for (std::size_t r : {7u, 31u, 101u}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_element(r, rng);
            auto b = random_element(r, rng);
            auto c = random_element(r, rng);
            CHECK(mul_schoolbook(a, b) == mul_schoolbook(b, a));
            CHECK(mul_schoolbook(mul_schoolbook(a, b), c) ==
                  mul_schoolbook(a, mul_schoolbook(b, c)));
            CHECK(mul_schoolbook(a, add(b, c)) ==
                  add(mul_schoolbook(a, b), mul_schoolbook(a, c)));
        }
    }
}

TEST_CASE("invert: trivial cases") {
    CHECK(invert(DenseRingElement::one(31)) == DenseRingElement::one(31));
    for (std::size_t k : {1u, 5u, 30u}) {
        DenseRingElement h(31);
        h.set(k, true);
        DenseRingElement expect(31);
        expect.set((31 - k) % 31, true);
        CHECK(invert(h) == expect);
    }
}

TEST_CASE("invert at r=7 against exhaustive oracle") {
    // 1 + x + x^3 divides x^7 - 1, so it must be rejected, not inverted.
    CHECK_THROWS_AS(invert(from_support(7, {0, 1, 3})), NotInvertibleError);

    auto h = from_support(7, {0, 1, 2});
    // Brute force over all 128 ring elements.
    DenseRingElement found(7);
    bool any = false;
    for (unsigned v = 0; v < 128; ++v) {
        DenseRingElement g(7);
        for (unsigned j = 0; j < 7; ++j)
            if (v >> j & 1) g.set(j, true);
        if (mul_schoolbook(h, g) == DenseRingElement::one(7)) {
            found = g;
            any = true;
        }
    }
    REQUIRE(any);
    CHECK(invert(h) == found);
    CHECK(mul_schoolbook(h, invert(h)) == DenseRingElement::one(7));
}

TEST_CASE("invert: non-invertible input raises NotInvertible") {
    // Even weight means h(1) = 0, so x+1 divides both h and x^r - 1.
    auto h = from_support(31, {0, 1, 4, 9});
    CHECK_THROWS_AS(invert(h), NotInvertibleError);
    CHECK_THROWS_AS(invert(DenseRingElement(31)), NotInvertibleError);
}

TEST_CASE("invert: checked mode holds degree invariant on random elements") {
    Rng rng(8);
    int inverted = 0;
    while (inverted < 25) {
        auto h = random_element(101, rng);
        try {
            InvertStats st;
            auto g = invert(h, true, &st);
            CHECK(st.invariant_violations == 0);
            CHECK(st.max_deg_sum <= 101);
            CHECK(mul_schoolbook(h, g) == DenseRingElement::one(101));
            ++inverted;
        } catch (const NotInvertibleError&) {
        }
    }
}

TEST_CASE("invert of sparse odd-weight elements at a tabled block size") {
    Rng rng(9);
    std::size_t r = 4801;
    auto h = random_support(r, 45, rng);
    auto g = invert(h.densify(), true);
    CHECK(mul_dense_sparse(g, h) == DenseRingElement::one(r));
}

TEST_CASE("mul result invariant under support reordering") {
    // SparseSupport sorts on construction; feed permuted input.
    Rng rng(10);
    auto a = random_element(101, rng);
    SparseSupport s1(101, {3, 50, 7, 90});
    SparseSupport s2(101, {90, 7, 3, 50});
    CHECK(mul_dense_sparse(a, s1) == mul_dense_sparse(a, s2));
}

TEST_CASE("dense serialization round-trip and pad checking") {
    Rng rng(11);
    auto a = random_element(101, rng);
    auto bytes = a.to_bytes();
    CHECK(bytes.size() == 13);
    CHECK(DenseRingElement::from_bytes(101, bytes) == a);
    bytes.back() |= 0x80;  // 101 % 8 = 5, so bit 7 of the last byte is padding
    CHECK_THROWS_AS(DenseRingElement::from_bytes(101, bytes), std::invalid_argument);
    CHECK_THROWS_AS(DenseRingElement::from_bytes(101, std::span<const std::uint8_t>()),
                    std::invalid_argument);
}

TEST_CASE("reverse is an involution and a ring automorphism") {
    Rng rng(12);
    auto a = random_element(31, rng);
    auto b = random_element(31, rng);
    CHECK(reverse(reverse(a)) == a);
    CHECK(reverse(mul_schoolbook(a, b)) == mul_schoolbook(reverse(a), reverse(b)));
}

TEST_CASE("usage errors on mismatched r") {
    CHECK_THROWS_AS(add(DenseRingElement(7), DenseRingElement(8)), std::invalid_argument);
    CHECK_THROWS_AS(mul_dense_sparse(DenseRingElement(7), SparseSupport(9, {0})),
                    std::invalid_argument);
}
