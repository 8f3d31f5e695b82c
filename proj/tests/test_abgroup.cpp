#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <map>
#include <vector>

#include "jacgraph/abgroup.hpp"
#include "jacgraph/jac.hpp"

using namespace jacgraph;

namespace {

// order of an element by repeated addition, independent of the dlog table
u64 element_order(const EnumeratedGroup& G, std::size_t x) {
    u64 k = 1;
    std::size_t y = x;
    while (y != G.identity) {
        y = G.add(y, x);
        ++k;
    }
    return k;
}

u64 num_characters(const GroupStructure& S) {
    u64 n = 1;
    for (u64 d : S.invariant_factors) n *= d;
    return n;
}

// exact test: chi_c restricted to the listed elements is identically 1
bool character_trivial_on(const GroupStructure& S, const CharacterIndex& c,
                          const std::vector<std::size_t>& ker) {
    u64 L = S.rank() == 0 ? 1 : S.invariant_factors.back();
    for (std::size_t y : ker) {
        u64 acc = 0;
        for (std::size_t j = 0; j < S.rank(); ++j) {
            u64 d = S.invariant_factors[j];
            u64 term = mulmod((c[j] * S.exponent(y, j)) % d, L / d, L);
            acc = addmod(acc, term, L);
        }
        if (acc != 0) return false;
    }
    return true;
}

void check_duality_order2(const EnumeratedGroup& G, const GroupStructure& S) {
    u64 elems = 0;
    for (std::size_t x = 0; x < G.n; ++x) {
        if (G.add(x, x) == G.identity) ++elems;
    }
    u64 chars = 0;
    for (u64 t = 0; t < num_characters(S); ++t) {
        if (character_is_real(S, character_from_ordinal(S, t))) ++chars;
    }
    REQUIRE(elems == chars);
}

void check_orthogonality_all_pairs(const GroupStructure& S) {
    u64 nc = num_characters(S);
    for (u64 a = 0; a < nc; ++a) {
        CharacterIndex ca = character_from_ordinal(S, a);
        for (u64 b = 0; b < nc; ++b) {
            CharacterIndex cb = character_from_ordinal(S, b);
            std::complex<double> acc = 0;
            for (std::size_t x = 0; x < S.n; ++x) {
                acc += character_eval(S, ca, x) * std::conj(character_eval(S, cb, x));
            }
            acc /= (double)S.n;
            double expect = a == b ? 1.0 : 0.0;
            REQUIRE(std::abs(acc.real() - expect) < 1e-9);
            REQUIRE(std::abs(acc.imag()) < 1e-9);
        }
    }
}

void check_dlog_homomorphism(const EnumeratedGroup& G, const GroupStructure& S, u64 pairs,
                             u64 seed) {
    DetRng rng(seed);
    std::size_t r = S.rank();
    for (u64 t = 0; t < pairs; ++t) {
        std::size_t x = (std::size_t)rng.below(G.n), y = (std::size_t)rng.below(G.n);
        std::size_t z = G.add(x, y);
        for (std::size_t j = 0; j < r; ++j) {
            u64 d = S.invariant_factors[j];
            REQUIRE((S.exponent(x, j) + S.exponent(y, j)) % d == S.exponent(z, j));
        }
    }
}

}  // namespace

TEST_CASE("group structure of cyclic and product groups") {
    SECTION("cyclic Z/6 collapses to a single invariant factor") {
        GroupStructure S = group_structure(raw_group({6}));
        REQUIRE(S.invariant_factors == std::vector<u64>{6});
        REQUIRE(S.dlog.size() == 6);
        check_dlog_homomorphism(raw_group({6}), S, 100, 1);
    }
    SECTION("Z/2 x Z/4 keeps both factors") {
        GroupStructure S = group_structure(raw_group({2, 4}));
        REQUIRE(S.invariant_factors == std::vector<u64>{2, 4});
    }
    SECTION("factor order in the input does not matter") {
        GroupStructure S = group_structure(raw_group({4, 2}));
        REQUIRE(S.invariant_factors == std::vector<u64>{2, 4});
    }
    SECTION("coprime factors merge by CRT") {
        GroupStructure S = group_structure(raw_group({2, 3}));
        REQUIRE(S.invariant_factors == std::vector<u64>{6});
    }
    SECTION("mixed prime powers form a divisibility chain") {
        GroupStructure S = group_structure(raw_group({2, 2, 3, 9}));
        REQUIRE(S.invariant_factors == std::vector<u64>{6, 18});
        check_dlog_homomorphism(raw_group({2, 2, 3, 9}), S, 1000, 2);
    }
    SECTION("trivial group has rank zero") {
        GroupStructure S = group_structure(raw_group({1}));
        REQUIRE(S.n == 1);
        REQUIRE(S.rank() == 0);
        REQUIRE(num_characters(S) == 1);
        REQUIRE(character_eval(S, {}, 0) == std::complex<double>(1.0, 0.0));
    }
    SECTION("every element gets the dlog vector its order demands") {
        EnumeratedGroup G = raw_group({8, 12});
        GroupStructure S = group_structure(G);
        REQUIRE(S.invariant_factors == std::vector<u64>{4, 24});
        // the largest invariant factor equals the group exponent
        u64 maxord = 1;
        for (std::size_t x = 0; x < G.n; ++x) maxord = std::max(maxord, element_order(G, x));
        REQUIRE(maxord == S.invariant_factors.back());
        check_dlog_homomorphism(G, S, 2000, 3);
    }
}

TEST_CASE("group structure rejects broken oracles") {
    SECTION("identity violation") {
        EnumeratedGroup G = raw_group({4});
        G.identity = 1;
        REQUIRE_THROWS_AS(group_structure(G), ValidationError);
    }
    SECTION("closure violation reported with a witness") {
        EnumeratedGroup G = raw_group({4});
        G.add = [](std::size_t i, std::size_t j) { return i == 0 && j == 2 ? 9 : (i + j) % 4; };
        try {
            group_structure(G);
            FAIL("expected a closure violation");
        } catch (const ValidationError& e) {
            REQUIRE(std::string(e.what()).find("add(0, 2)") != std::string::npos);
        }
    }
    SECTION("inverse table violation") {
        EnumeratedGroup G = raw_group({5});
        G.neg[2] = 2;
        REQUIRE_THROWS_AS(group_structure(G), ValidationError);
    }
    SECTION("order cap") {
        EnumeratedGroup G;
        G.n = kGroupEnumCap + 1;
        REQUIRE_THROWS_AS(group_structure(G), CapError);
    }
}

TEST_CASE("character evaluation matches the defining formula") {
    GroupStructure Z4 = group_structure(raw_group({4}));
    GroupStructure Z5 = group_structure(raw_group({5}));

    SECTION("trivial character is identically one") {
        for (std::size_t x = 0; x < 4; ++x) {
            REQUIRE(std::abs(character_eval(Z4, {0}, x) - std::complex<double>(1, 0)) < 1e-12);
        }
    }
    SECTION("order-two character on Z/4") {
        REQUIRE(std::abs(character_eval(Z4, {2}, 1) - std::complex<double>(-1, 0)) < 1e-12);
        REQUIRE(character_is_real(Z4, {2}));
        REQUIRE(!character_is_real(Z4, {1}));
    }
    SECTION("generic fifth root of unity") {
        std::complex<double> expect = std::polar(1.0, 4.0 * std::numbers::pi / 5.0);
        REQUIRE(std::abs(character_eval(Z5, {1}, 2) - expect) < 1e-12);
    }
    SECTION("character sums over subsets") {
        REQUIRE(std::abs(char_sum_over_set(Z4, {0}, {1, 3}) - std::complex<double>(2, 0)) < 1e-12);
        REQUIRE(std::abs(char_sum_over_set(Z4, {1}, {1, 3})) < 1e-12);  // i + i^3 = 0
        REQUIRE(std::abs(char_sum_over_set(Z4, {2}, {1, 3}) - std::complex<double>(-2, 0)) <
                1e-12);
    }
    SECTION("character ordinal decoding round trips") {
        GroupStructure S = group_structure(raw_group({2, 2, 3, 9}));  // factors 6 | 18
        REQUIRE_THROWS_AS(character_from_ordinal(S, 108), ValidationError);
        CharacterIndex c = character_from_ordinal(S, 25);  // 25 = 1*18 + 7
        REQUIRE(c == CharacterIndex{1, 7});
    }
    SECTION("orthogonality on small groups, all pairs") {
        check_orthogonality_all_pairs(Z4);
        check_orthogonality_all_pairs(group_structure(raw_group({2, 2, 3})));
    }
    SECTION("order-two duality on product groups") {
        check_duality_order2(raw_group({4}), Z4);
        check_duality_order2(raw_group({2, 4}), group_structure(raw_group({2, 4})));
        check_duality_order2(raw_group({2, 2, 3, 9}), group_structure(raw_group({2, 2, 3, 9})));
    }
}

TEST_CASE("group structure of jacobian groups") {
    Fq F5(5, 1);
    CurveData E = CurveData::genus1(5, 1, 1);

    SECTION("split modulus, order 36") {
        auto J = std::make_shared<Jacobian>(E, F5, ModulusSpec::split(0, 1, 2, 1));
        EnumeratedGroup G = group_of(J);
        GroupStructure S = group_structure(G);
        u64 prod = 1;
        for (u64 d : S.invariant_factors) prod *= d;
        REQUIRE(prod == 36);
        // independent oracle: the largest invariant factor is the group exponent
        u64 maxord = 1;
        for (std::size_t x = 0; x < G.n; ++x) maxord = std::max(maxord, element_order(G, x));
        REQUIRE(maxord == S.invariant_factors.back());
        check_dlog_homomorphism(G, S, 100000, 4);
        check_orthogonality_all_pairs(S);
        check_duality_order2(G, S);

        // characters trivial on the fibration kernel biject with the base curve
        std::vector<std::size_t> kernel;
        for (std::size_t i = 0; i < J->size(); ++i) {
            if (J->element(i).P.inf) kernel.push_back(i);
        }
        REQUIRE(kernel.size() == 4);  // F_5^*
        u64 trivial_on_kernel = 0;
        for (u64 t = 0; t < num_characters(S); ++t) {
            if (character_trivial_on(S, character_from_ordinal(S, t), kernel)) ++trivial_on_kernel;
        }
        REQUIRE(trivial_on_kernel == 9);  // |E(F_5)|
    }

    SECTION("double-point modulus, order 45") {
        auto J = std::make_shared<Jacobian>(E, F5, ModulusSpec::double_point(0, 1));
        EnumeratedGroup G = group_of(J);
        GroupStructure S = group_structure(G);
        u64 prod = 1;
        for (u64 d : S.invariant_factors) prod *= d;
        REQUIRE(prod == 45);
        u64 maxord = 1;
        for (std::size_t x = 0; x < G.n; ++x) maxord = std::max(maxord, element_order(G, x));
        REQUIRE(maxord == S.invariant_factors.back());
        check_dlog_homomorphism(G, S, 100000, 5);
        check_duality_order2(G, S);

        std::vector<std::size_t> kernel;
        for (std::size_t i = 0; i < J->size(); ++i) {
            if (J->element(i).P.inf) kernel.push_back(i);
        }
        REQUIRE(kernel.size() == 5);  // additive F_5
        u64 trivial_on_kernel = 0;
        for (u64 t = 0; t < num_characters(S); ++t) {
            if (character_trivial_on(S, character_from_ordinal(S, t), kernel)) ++trivial_on_kernel;
        }
        REQUIRE(trivial_on_kernel == 9);
    }

    SECTION("genus-2 jacobian over F_7") {
        CurveData C2 = CurveData::genus2(7, {1, 0, 0, 0, 0, 1});  // y^2 = x^5 + 1
        Fq F7(7, 1);
        auto J = std::make_shared<Jacobian>(C2, F7, ModulusSpec::empty());
        EnumeratedGroup G = group_of(J);
        GroupStructure S = group_structure(G);
        u64 prod = 1;
        for (u64 d : S.invariant_factors) prod *= d;
        REQUIRE(prod == J->size());
        u64 maxord = 1;
        for (std::size_t x = 0; x < G.n; ++x) maxord = std::max(maxord, element_order(G, x));
        REQUIRE(maxord == S.invariant_factors.back());
        check_dlog_homomorphism(G, S, 100000, 6);
    }

    SECTION("extension field split jacobian, order 648") {
        Fq F25(5, 2);
        auto J = std::make_shared<Jacobian>(E, F25, ModulusSpec::split(0, 1, 2, 1));
        EnumeratedGroup G = group_of(J);
        GroupStructure S = group_structure(G);
        u64 prod = 1;
        for (u64 d : S.invariant_factors) prod *= d;
        REQUIRE(prod == 648);
        check_dlog_homomorphism(G, S, 100000, 7);

        // random orthogonality pairs above the all-pairs size threshold
        DetRng rng(8);
        for (int t = 0; t < 200; ++t) {
            CharacterIndex ca = character_from_ordinal(S, rng.below(num_characters(S)));
            CharacterIndex cb = character_from_ordinal(S, rng.below(num_characters(S)));
            std::complex<double> acc = 0;
            for (std::size_t x = 0; x < S.n; ++x) {
                acc += character_eval(S, ca, x) * std::conj(character_eval(S, cb, x));
            }
            acc /= (double)S.n;
            double expect = ca == cb ? 1.0 : 0.0;
            REQUIRE(std::abs(acc.real() - expect) < 1e-8);
            REQUIRE(std::abs(acc.imag()) < 1e-8);
        }

        std::vector<std::size_t> kernel;
        for (std::size_t i = 0; i < J->size(); ++i) {
            if (J->element(i).P.inf) kernel.push_back(i);
        }
        REQUIRE(kernel.size() == 24);  // F_25^*
        u64 trivial_on_kernel = 0;
        for (u64 t = 0; t < num_characters(S); ++t) {
            if (character_trivial_on(S, character_from_ordinal(S, t), kernel)) ++trivial_on_kernel;
        }
        REQUIRE(trivial_on_kernel == 27);  // |E(F_25)|
    }
}
