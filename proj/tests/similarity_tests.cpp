#include "cdimpact/similarity.hpp"

#include "cdimpact/model_text.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

using namespace cdimpact;

TEST_CASE("levenshtein distance agrees with the reference matrix") {
    const std::pair<const char*, const char*> pairs[] = {
        {"", ""},           {"", "abc"},        {"abc", ""},
        {"abc", "abc"},     {"kitten", "sitting"}, {"flaw", "lawn"},
        {"name", "newName"}, {"Customer", "Client"}, {"TroubleCd", "TroubleCode"},
        {"a", "b"},         {"ab", "ba"},       {"abcdefghij", "nopqrstuvwx"},
    };
    for (const auto& [a, b] : pairs) {
        CAPTURE(a);
        CAPTURE(b);
        CHECK(levenshtein_distance(a, b) == testsupport::oracle_levenshtein(a, b));
        CHECK(levenshtein_distance(a, b) == levenshtein_distance(b, a));
    }
}

TEST_CASE("levenshtein frozen values") {
    // Hand-checked DP matrices; these anchor the similarity scores below.
    CHECK(levenshtein_distance("name", "newName") == 3);
    CHECK(levenshtein_distance("Customer", "Client") == 7);
    CHECK(levenshtein_distance("name", "caption") == 6);
    CHECK(levenshtein_distance("kitten", "sitting") == 3);
}

TEST_CASE("name similarity") {
    CHECK(name_similarity("abc", "abc") == doctest::Approx(1.0));
    CHECK(name_similarity("", "") == doctest::Approx(1.0));
    CHECK(name_similarity("abc", "") == doctest::Approx(0.0));
    CHECK(name_similarity("name", "newName") == doctest::Approx(4.0 / 7.0));
    CHECK(name_similarity("Customer", "Client") == doctest::Approx(0.125));
    CHECK(name_similarity("name", "caption") == doctest::Approx(1.0 / 7.0));

    // Symmetric and in range on arbitrary pairs.
    const char* words[] = {"", "a", "Account", "AccountNumber", "zzzz"};
    for (const char* a : words) {
        for (const char* b : words) {
            double s = name_similarity(a, b);
            CHECK(s == doctest::Approx(name_similarity(b, a)));
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
}

TEST_CASE("structural similarity is the attribute-name jaccard index") {
    Model m = parse_model(
        "package p {\n"
        "  class A { id: Int\n name: String }\n"
        "  class B { id: Int\n addr: String }\n"
        "  class C {}\n"
        "  class D {}\n"
        "  class E { id: Int\n name: String }\n"
        "}\n");
    const ClassDecl& a = *m.find_class("p.A");
    const ClassDecl& b = *m.find_class("p.B");
    const ClassDecl& c = *m.find_class("p.C");
    const ClassDecl& d = *m.find_class("p.D");
    const ClassDecl& e = *m.find_class("p.E");

    CHECK(structural_similarity(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(structural_similarity(a, b) ==
          doctest::Approx(testsupport::oracle_jaccard({"id", "name"}, {"id", "addr"})));
    CHECK(structural_similarity(a, a) == doctest::Approx(1.0));
    CHECK(structural_similarity(a, e) == doctest::Approx(1.0));
    CHECK(structural_similarity(a, c) == doctest::Approx(0.0));
    CHECK(structural_similarity(c, d) == doctest::Approx(1.0));
}
