#include <catch2/catch_amalgamated.hpp>

#include "ppg/dsl.hpp"
#include "ppg/presentations.hpp"

using namespace ppg;

TEST_CASE("make_demushkin") {
    auto [pres, theta] = make_demushkin(3, 1, 2);
    REQUIRE(pres.n_gens() == 4);
    REQUIRE(pres.relators.size() == 1);
    REQUIRE(pres.relators[0] == pres.word("x1^3 [x1,y1] [x2,y2]"));
    REQUIRE(theta.values[1] == Rational(-1, 2));
    REQUIRE(theta.values[0] == 1);
    REQUIRE(theta.values[2] == 1);
    REQUIRE(validate_minimal(pres).minimal);

    auto [inf, theta_inf] = make_demushkin(3, std::nullopt, 1);
    REQUIRE(inf.relators[0] == inf.word("[x1,y1]"));
    REQUIRE(theta_inf.is_trivial());

    auto [d52, _] = make_demushkin(5, 2, 1);
    REQUIRE(d52.relators[0] == d52.word("x1^25 [x1,y1]"));
    REQUIRE(validate_minimal(d52).minimal);

    REQUIRE_THROWS(make_demushkin(2, 1, 1));  // p=2 needs k>=2
    REQUIRE_THROWS(make_demushkin(4, 1, 1));  // not prime
    REQUIRE_THROWS(make_demushkin(3, 1, 0));
}

TEST_CASE("make_f1") {
    Presentation f1 = make_f1(3, 1, 2);
    REQUIRE(f1.relators.size() == 1);
    REQUIRE(f1.relators[0] == f1.word("[x1^3,y1][x2,y2]"));
    REQUIRE(validate_minimal(f1).minimal);
    REQUIRE_THROWS_AS(make_f1(2, 1, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(make_f1(3, 1, 1), std::invalid_argument);
    REQUIRE(make_f1(2, 2, 2).relators[0].syllables().size() > 0);
}

TEST_CASE("make_f2") {
    Presentation f2 = make_f2(3, 1, 2, "x1", "x2");
    REQUIRE(f2.relators.size() == 2);
    REQUIRE(f2.relators[0] == f2.word("x1^3[x1,y1][x2,y2]"));
    REQUIRE(f2.relators[1] == f2.word("[x1,x2]"));
    REQUIRE(validate_minimal(f2).minimal);
    REQUIRE_THROWS_AS(make_f2(3, 1, 2, "x1", "y1"), std::invalid_argument);
    REQUIRE_THROWS_AS(make_f2(3, 1, 2, "x1", "x1"), std::invalid_argument);

    Presentation q0 = make_f2(3, std::nullopt, 2, "y1", "y2");
    REQUIRE(q0.relators[0] == q0.word("[x1,y1][x2,y2]"));
    REQUIRE(q0.relators[1] == q0.word("[y1,y2]"));
}

TEST_CASE("make_chain_amalgam") {
    Presentation c = make_chain_amalgam(3, 3);
    REQUIRE(c.n_gens() == 6);
    REQUIRE(c.relators.size() == 2);
    REQUIRE(c.relators[0] == c.word("[x1,y1]([x2,y2])^-1"));
    REQUIRE(c.relators[1] == c.word("[x1,y1]([x3,y3])^-1"));
    REQUIRE(validate_minimal(c).minimal);

    REQUIRE(make_chain_amalgam(2, 3).relators.size() == 2);
    REQUIRE(make_chain_amalgam(5, 4).relators.size() == 3);
    REQUIRE_THROWS_AS(make_chain_amalgam(3, 2), std::invalid_argument);
}

TEST_CASE("family constructors produce minimal presentations with 2d generators") {
    for (auto* pres : {new Presentation(make_f1(3, 1, 2)), new Presentation(make_f1(5, 1, 3)),
                       new Presentation(make_f2(3, 1, 2, "x1", "x2")),
                       new Presentation(make_chain_amalgam(3, 4))}) {
        REQUIRE(validate_minimal(*pres).minimal);
        REQUIRE(pres->n_gens() == 2 * pres->family->d);
        delete pres;
    }
}

TEST_CASE("DSL round trip") {
    std::string text = R"(
group example {
  prime 3;
  generators x1 y1 x2 y2;
  relator [x1^3,y1][x2,y2];
  orientation y1 = -1/2;
}
)";
    DslDocument doc = parse_dsl_text(text);
    REQUIRE(doc.presentation.name == "example");
    REQUIRE(doc.presentation.p == 3);
    REQUIRE(doc.presentation.relators.size() == 1);
    REQUIRE(doc.presentation.relators[0] == make_f1(3, 1, 2).relators[0]);
    REQUIRE(doc.orientation.has_value());
    REQUIRE(doc.orientation->values[1] == Rational(-1, 2));
    REQUIRE(doc.orientation->values[0] == 1);

    std::string out = serialize_dsl(doc.presentation, &*doc.orientation);
    DslDocument again = parse_dsl_text(out);
    REQUIRE(again.presentation.relators == doc.presentation.relators);
    REQUIRE(again.orientation->values == doc.orientation->values);
}

TEST_CASE("DSL family shorthand") {
    DslDocument doc = parse_dsl_text("group g { family f1(3,1,2); }");
    REQUIRE(doc.presentation.family.has_value());
    REQUIRE(doc.presentation.family->kind == FamilyKind::F1);
    REQUIRE(doc.presentation.relators == make_f1(3, 1, 2).relators);

    DslDocument bare = parse_dsl_text("family f2(3,inf,2,y1,y2);");
    REQUIRE(bare.presentation.relators.size() == 2);

    DslDocument dem = parse_dsl_text("family demushkin(3,1,2);");
    REQUIRE(dem.presentation.relators == make_demushkin(3, 1, 2).first.relators);
}

TEST_CASE("DSL errors carry positions") {
    try {
        parse_dsl_text("group g {\n  prime 3;\n  generators x1 y1;\n  relator x1^;\n}");
        FAIL("expected DslError");
    } catch (const DslError& e) {
        REQUIRE(e.line == 4);
    }
    REQUIRE_THROWS_AS(parse_dsl_text("group g { prime 4; generators x; relator x; }"),
                      std::exception);
    REQUIRE_THROWS_AS(parse_dsl_text("group g { prime 3; generators x x; relator x; }"),
                      DslError);
    REQUIRE_THROWS_AS(parse_dsl_text("family f9(3,1,2);"), DslError);
}

TEST_CASE("orientation validation") {
    REQUIRE_NOTHROW(Orientation(3, {Rational(1), Rational(-1, 2)}));
    REQUIRE_THROWS_AS(Orientation(3, {Rational(2)}), std::domain_error);
    REQUIRE_THROWS_AS(Orientation(3, {Rational(1, 3)}), std::domain_error);
    // p = 2: values must be 1 mod 4
    REQUIRE_THROWS_AS(Orientation(2, {Rational(3)}), std::domain_error);
    REQUIRE_NOTHROW(Orientation(2, {Rational(5)}));

    Orientation theta(3, {Rational(1), Rational(-1, 2)});
    std::vector<Generator> ab = {{"x", 0}, {"y", 1}};
    Word w = parse_word("y^2 x y^-1", ab);
    REQUIRE(theta.eval(w) == Rational(-1, 2));
}
