#include <utpc/field.hpp>

#include <doctest.h>

using namespace utpc;

TEST_CASE("prime field construction")
{
    Field f(3, 1);
    CHECK(f.order() == 3);
    CHECK(f.characteristic() == 3);
    CHECK(f.degree() == 1);
    for (int a = 0; a < 3; ++a)
        CHECK(f.element(a).index() == a);
}

TEST_CASE("pinned moduli")
{
    CHECK(Field(2, 2).modulus() == std::vector<int>{1, 1, 1});     // x^2+x+1
    CHECK(Field(2, 3).modulus() == std::vector<int>{1, 1, 0, 1});  // x^3+x+1
    CHECK(Field(3, 2).modulus() == std::vector<int>{1, 0, 1});     // x^2+1
}

TEST_CASE("construction rejects bad parameters")
{
    CHECK_THROWS_AS(Field(4, 1), Error);    // not prime
    CHECK_THROWS_AS(Field(2, 9), Error);    // 512 > 256
    CHECK_THROWS_AS(Field(257, 1), Error);  // prime but too large
    CHECK_THROWS_AS(Field(2, 0), Error);
}

TEST_CASE("basic arithmetic")
{
    auto f3 = get_field(3, 1);
    CHECK((f3->element(2) + f3->element(2)).index() == 1);  // 4 mod 3

    auto f5 = get_field(5, 1);
    CHECK(f5->element(2).inverse().index() == 3);  // 2*3 = 6 = 1

    auto f4 = get_field(2, 2);
    FieldElem g = f4->generator();
    CHECK(g.index() == 2);                 // the polynomial x
    CHECK((g * g) == g + f4->one());       // x^2 reduced by x^2+x+1
}

TEST_CASE("division and errors")
{
    auto f7 = get_field(7, 1);
    for (int a = 1; a < 7; ++a)
        CHECK((f7->element(a) / f7->element(a)) == f7->one());
    CHECK_THROWS_AS(f7->element(0).inverse(), Error);

    auto f3 = get_field(3, 1);
    CHECK_THROWS_AS(f7->element(1) + f3->element(1), Error);  // mixed fields
}

TEST_CASE("field axioms hold exhaustively for q <= 16")
{
    for (auto [p, k] : {std::pair{2, 4}, {3, 2}, {13, 1}}) {
        auto f = get_field(p, k);
        int q = f->order();
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                CHECK(f->add(a, b) == f->add(b, a));
                CHECK(f->mul(a, b) == f->mul(b, a));
                CHECK(f->add(a, f->neg(a)) == 0);
                for (int c = 0; c < q; ++c) {
                    CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
                    CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
                }
            }
        for (int a = 1; a < q; ++a)
            CHECK(f->pow(a, q - 1) == 1);
    }
}

TEST_CASE("largest supported field builds and is exact on samples")
{
    auto f = get_field(2, 8);
    CHECK(f->order() == 256);
    for (int a = 1; a < 256; a += 17) {
        CHECK(f->mul(a, f->inv(a)) == 1);
        CHECK(f->pow(a, 255) == 1);
    }
}

TEST_CASE("frobenius")
{
    auto f3 = get_field(3, 1);
    CHECK(frobenius(f3->element(2), 0).index() == 2);
    CHECK(f3->frobenius(2, 5) == 2);  // power reduced mod k = 1

    auto f4 = get_field(2, 2);
    FieldElem g = f4->generator();
    CHECK(frobenius(g, 1) == g + f4->one());  // g^2 reduced by the modulus

    auto f9 = get_field(3, 2);
    for (int a = 0; a < 9; ++a) {
        FieldElem x = f9->element(a);
        CHECK(frobenius(frobenius(x, 1), 1) == x);  // order divides k = 2
    }
}

TEST_CASE("frobenius is a ring automorphism")
{
    auto f8 = get_field(2, 3);
    for (int i = 0; i < 3; ++i) {
        std::vector<bool> seen(8, false);
        for (int a = 0; a < 8; ++a) {
            int fa = f8->frobenius(a, i);
            CHECK(!seen[fa]);
            seen[fa] = true;
            for (int b = 0; b < 8; ++b) {
                CHECK(f8->frobenius(f8->add(a, b), i) == f8->add(fa, f8->frobenius(b, i)));
                CHECK(f8->frobenius(f8->mul(a, b), i) == f8->mul(fa, f8->frobenius(b, i)));
            }
        }
    }
}

TEST_CASE("integers embed through the prime subfield")
{
    auto f9 = get_field(3, 2);
    CHECK(f9->from_int(5).index() == 2);
    CHECK(f9->from_int(-1) == -f9->one());
}

TEST_CASE("prime power factorization")
{
    CHECK(prime_power(9) == std::pair{3, 2});
    CHECK(prime_power(16) == std::pair{2, 4});
    CHECK(prime_power(7) == std::pair{7, 1});
    CHECK_THROWS_AS(prime_power(12), Error);
    CHECK_THROWS_AS(prime_power(1), Error);
}
