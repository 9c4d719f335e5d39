#include <doctest.h>


#include "hjvisc/hamiltonian.hpp"
#include "support/oracles.hpp"
#include "support/trees.hpp"

using namespace hjvisc;
using hjvisc::testing::ReferenceEvaluator;
using hjvisc::testing::TreeGen;
using hjvisc::testing::bit_equal;

TEST_CASE("parsing the example Hamiltonians") {
    const Hamiltonian lin = Hamiltonian::parse("p - 1");
    CHECK(same_tree(lin.root(), *Expr::binary(Op::sub, Expr::variable(Var::p), Expr::constant(1))));
    CHECK(lin(0.3, 7.0, 1.0) == 0.0);
    CHECK(lin.to_string() == "p - 1");

    const Hamiltonian quad = Hamiltonian::parse("-u * p^2");
    const auto expected =
        Expr::binary(Op::mul, Expr::unary(Op::neg, Expr::variable(Var::u)), Expr::power(Expr::variable(Var::p), 2));
    CHECK(same_tree(quad.root(), *expected));
    CHECK(quad(0.25, 1.0, 3.0) == -9.0);
    CHECK(quad(0.25, 0.0, 7.0) == 0.0);
    CHECK(quad.to_string() == "-u * p^2");

    for (const char* src : {"p - 1", "-u * p^2", "abs(p) - 1", "min(x, 1 - x) + max(u, -p^2)"}) {
        const Hamiltonian h = Hamiltonian::parse(src);
        CHECK(same_tree(Hamiltonian::parse(h.to_string()).root(), h.root()));
    }
}

TEST_CASE("precedence and associativity") {
    auto at = [](const char* src, double x, double u, double p) { return Hamiltonian::parse(src)(x, u, p); };
    CHECK(at("1 - 2 - 3", 0, 0, 0) == -4.0);
    CHECK(at("8 / 4 / 2", 0, 0, 0) == 1.0);
    CHECK(at("-p^2", 0, 0, 3) == -9.0);
    CHECK(at("(-p)^2", 0, 0, 3) == 9.0);
    CHECK(at("2^3^2", 0, 0, 0) == 512.0);
    CHECK(at("1 + 2 * 3", 0, 0, 0) == 7.0);
    CHECK(at("x*u - -p", 2, 3, 1) == 7.0);
    CHECK(at("  abs ( x-u )  ", 1, 4, 0) == 3.0);
    CHECK(at("p^0", 0, 0, 0) == 1.0);
    CHECK(at("1.5e1 + .5", 0, 0, 0) == 15.5);
}

TEST_CASE("syntax errors carry byte offsets") {
    auto offset = [](const char* src) -> long {
        try {
            (void)Hamiltonian::parse(src);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1;
    };
    CHECK(offset("p +") == 3);
    CHECK(offset("2p") == 1);
    CHECK(offset("") == 0);
    CHECK(offset("p ^ 1.5") == 4);
    CHECK(offset("p ^ -1") == 4);
    CHECK(offset("y + 1") == 0);
    CHECK(offset("min(p)") == 5);
    CHECK(offset("(p - 1") == 6);
    CHECK(offset("p $ 1") == 2);
    CHECK(offset("p^1001") == 2);
    CHECK(offset("p^10^4") == 5);
    CHECK(offset("p^1000") == -1);
    CHECK_THROWS_WITH_AS(Hamiltonian::parse("p +"), doctest::Contains("offset 3"), ParseError);
}

TEST_CASE("evaluation errors") {
    const Hamiltonian h = Hamiltonian::parse("1 / (p - 1)");
    CHECK(h.uses_division());
    CHECK(h(0, 0, 3) == 0.5);
    CHECK_THROWS_AS(h(0, 0, 1), EvalError);
    CHECK_FALSE(Hamiltonian::parse("abs(p) - 1").uses_division());
}

TEST_CASE("random trees round-trip and match the reference evaluator") {
    TreeGen gen(2024);
    int divisions = 0;
    for (int i = 0; i < 1000; ++i) {
        const Hamiltonian h(gen.tree(5));
        const std::string text = h.to_string();
        CAPTURE(text);
        const Hamiltonian back = Hamiltonian::parse(text);
        REQUIRE(same_tree(back.root(), h.root()));
        CHECK(back.to_string() == text);
        for (int k = 0; k < 4; ++k) {
            const double x = gen.input(), u = gen.input(), p = gen.input();
            bool lib_threw = false, ref_threw = false;
            double lib = 0.0, ref = 0.0;
            try {
                lib = h(x, u, p);
            } catch (const EvalError&) {
                lib_threw = true;
            }
            try {
                ref = ReferenceEvaluator::evaluate(text, x, u, p);
            } catch (const ReferenceEvaluator::DivisionByZero&) {
                ref_threw = true;
            }
            divisions += lib_threw;
            CHECK(lib_threw == ref_threw);
            if (!lib_threw && !ref_threw) CHECK(bit_equal(lib, ref));
        }
    }
    // Constants include 0, so some divisions by zero are exercised.
    CHECK(divisions > 0);
}
