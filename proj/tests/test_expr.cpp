#include "agr/expr.hpp"
#include "agr/groups.hpp"
#include "doctest.h"

using namespace agr;

namespace {

ExprEnv grig_env() { return grigorchuk().env(); }

}  // namespace

TEST_CASE("expression literals and products") {
    ExprEnv env = grig_env();
    CHECK(parse_expression("a", env) == env.at("a"));
    CHECK(parse_expression("b*c", env) == env.at("d"));
    CHECK(parse_expression("a*a", env).trivial());
    CHECK(parse_expression("a*b*a*b", env) ==
          mul(mul(env.at("a"), env.at("b")), mul(env.at("a"), env.at("b"))));
    CHECK(parse_expression("  b\t* c ", env) == env.at("d"));
}

TEST_CASE("powers bind tighter than products") {
    ExprEnv env = grig_env();
    Element ab = mul(env.at("a"), env.at("b"));
    CHECK(parse_expression("a^2", env).trivial());
    CHECK(parse_expression("(a*b)^2", env) == mul(ab, ab));
    // a*b^2 = a * (b^2) = a, not (a*b)^2.
    CHECK(parse_expression("a*b^2", env) == env.at("a"));
    CHECK(parse_expression("a^0", env).trivial());
    CHECK(parse_expression("a^-1", env) == env.at("a"));
    Element x = parse_expression("(a*b)^-3", env);
    CHECK(x == inv(mul(ab, mul(ab, ab))));
}

TEST_CASE("parentheses group subexpressions") {
    ExprEnv env = grig_env();
    CHECK(parse_expression("(b*c)", env) == env.at("d"));
    CHECK(parse_expression("((a))", env) == env.at("a"));
    CHECK(parse_expression("(b*a)^4*c", env) ==
          mul(power(mul(env.at("b"), env.at("a")), 4), env.at("c")));
}

TEST_CASE("comm and conj calls") {
    ExprEnv env = grig_env();
    CHECK(parse_expression("comm(a,b)", env) == commutator(env.at("a"), env.at("b")));
    CHECK(parse_expression("conj(b, a)", env) == conjugate(env.at("b"), env.at("a")));
    CHECK(parse_expression("comm(a, b)^2", env) ==
          power(commutator(env.at("a"), env.at("b")), 2));
    CHECK(parse_expression("comm(a*b, c^-1)", env) ==
          commutator(mul(env.at("a"), env.at("b")), inv(env.at("c"))));
    CHECK(parse_expression("conj(comm(a,b), d)", env) ==
          conjugate(commutator(env.at("a"), env.at("b")), env.at("d")));
}

TEST_CASE("environment bindings extend the vocabulary") {
    ExprEnv env = grig_env();
    env["x"] = parse_expression("comm(a,b)", env);
    CHECK(parse_expression("x^-2 * conj(x^2, c*a)", env) ==
          mul(power(env.at("x"), -2), conjugate(power(env.at("x"), 2),
                                                mul(env.at("c"), env.at("a")))));
}

TEST_CASE("errors carry the failing offset") {
    ExprEnv env = grig_env();
    CHECK_THROWS_AS(parse_expression("", env), ExprError);
    CHECK_THROWS_AS(parse_expression("a*", env), ExprError);
    CHECK_THROWS_AS(parse_expression("*a", env), ExprError);
    CHECK_THROWS_AS(parse_expression("(a", env), ExprError);
    CHECK_THROWS_AS(parse_expression("a)", env), ExprError);
    CHECK_THROWS_AS(parse_expression("a^", env), ExprError);
    CHECK_THROWS_AS(parse_expression("a^b", env), ExprError);
    CHECK_THROWS_AS(parse_expression("comm(a)", env), ExprError);
    CHECK_THROWS_AS(parse_expression("comm(a,b", env), ExprError);
    CHECK_THROWS_AS(parse_expression("q", env), ExprError);  // unknown name

    try {
        parse_expression("a*(b", env);
        FAIL("expected ExprError");
    } catch (const ExprError& e) {
        CHECK(e.pos >= 2);
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
}
