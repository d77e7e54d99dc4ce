#include "cdimpact/matching.hpp"
#include "cdimpact/model_text.hpp"
#include "cdimpact/presettings.hpp"
#include "cdimpact/similarity.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

using namespace cdimpact;

namespace {

ElementRef class_ref(const char* qname) {
    return ElementRef{RefKind::Class, QualifiedName::parse(qname)};
}

ElementRef attr_ref(const char* qname) {
    return ElementRef{RefKind::Attribute, QualifiedName::parse(qname)};
}

ElementRef package_ref(const char* qname) {
    return ElementRef{RefKind::Package, QualifiedName::parse(qname)};
}

}  // namespace

TEST_CASE("presetting parser handles the rename instruction") {
    PresettingSet set = parse_presettings("renamed \"de.TroubleCd#name\" to \"newName\";\n");
    REQUIRE(set.items.size() == 1);
    const Presetting& p = set.items[0];
    CHECK(p.instruction == PresetInstruction::Renamed);
    CHECK(p.subject.kind == RefKind::Attribute);
    CHECK(p.subject.str() == "de.TroubleCd#name");
    CHECK(p.target == "newName");
}

TEST_CASE("presetting parser handles moves, comments, several items") {
    PresettingSet set = parse_presettings(
        "// corrections for release 2\n"
        "renamed \"de.TroubleCd\" to \"TroubleCode\";\n"
        "moved \"de.Customer\" to \"de.crm\";\n");
    REQUIRE(set.items.size() == 2);
    CHECK(set.items[0].instruction == PresetInstruction::Renamed);
    CHECK(set.items[0].subject.kind == RefKind::Class);
    CHECK(set.items[1].instruction == PresetInstruction::Moved);
    CHECK(set.items[1].target == "de.crm");
    CHECK(parse_presettings("").empty());
}

TEST_CASE("presetting parser rejects malformed input") {
    CHECK_THROWS_AS(parse_presettings("renamed \"a.B\" to \"x\""), ParseError);  // no ';'
    CHECK_THROWS_AS(parse_presettings("rename \"a.B\" to \"x\";"), ParseError);
    CHECK_THROWS_AS(parse_presettings("renamed \"a.B\" \"x\";"), ParseError);
    CHECK_THROWS_AS(parse_presettings("renamed \"a..B\" to \"x\";"), ParseError);
    // Rename targets are simple names, move targets qualified names.
    CHECK_THROWS_AS(parse_presettings("renamed \"a.B\" to \"x.y\";"), ParseError);
    CHECK_THROWS_AS(parse_presettings("moved \"a.B\" to \"9bad\";"), ParseError);
    // The same subject twice is contradictory.
    CHECK_THROWS_AS(parse_presettings("renamed \"a.B\" to \"x\";\nrenamed \"a.B\" to \"y\";"),
                    ParseError);
}

TEST_CASE("matching is exact for identical models") {
    Model m = parse_model(
        "package p {\n"
        "  class A { x: Int }\n"
        "  class B {}\n"
        "}\n"
        "association R [1] p.A -> [1] p.B\n");
    Matching match = match_models(m, m);
    CHECK(match.find_by_old(package_ref("p")) != nullptr);
    CHECK(match.find_by_old(class_ref("p.A")) != nullptr);
    CHECK(match.find_by_old(attr_ref("p.A#x")) != nullptr);
    ElementRef r;
    r.kind = RefKind::Association;
    r.qname.segments = {"R"};
    const MatchPair* pr = match.find_by_old(r);
    REQUIRE(pr != nullptr);
    CHECK(pr->provenance == MatchProvenance::Exact);
}

TEST_CASE("similar class rename is matched heuristically") {
    // nameSim("name","newName") = 4/7, so the attribute scores
    // 0.7*4/7 + 0.3 = 0.7 >= 0.65 and pairs up without a presetting.
    Model old_m = parse_model("package p { class A { name: String } }\n");
    Model new_m = parse_model("package p { class A { newName: String } }\n");
    Matching match = match_models(old_m, new_m);
    const MatchPair* pair = match.find_by_old(attr_ref("p.A#name"));
    REQUIRE(pair != nullptr);
    CHECK(pair->new_ref.str() == "p.A#newName");
    CHECK(pair->provenance == MatchProvenance::Similarity);
    CHECK(pair->score == doctest::Approx(0.7 * 4.0 / 7.0 + 0.3));
}

TEST_CASE("dissimilar attribute rename stays unmatched without a presetting") {
    // nameSim("name","caption") = 1/7, score 0.4 < 0.65.
    Model old_m = parse_model("package p { class A { name: String } }\n");
    Model new_m = parse_model("package p { class A { caption: String } }\n");
    Matching match = match_models(old_m, new_m);
    CHECK(match.find_by_old(attr_ref("p.A#name")) == nullptr);

    PresettingSet preset = parse_presettings("renamed \"p.A#name\" to \"caption\";");
    Matching forced = match_models(old_m, new_m, preset);
    const MatchPair* pair = forced.find_by_old(attr_ref("p.A#name"));
    REQUIRE(pair != nullptr);
    CHECK(pair->new_ref.str() == "p.A#caption");
    CHECK(pair->provenance == MatchProvenance::Preset);
}

TEST_CASE("class similarity threshold separates Customer from Client") {
    // nameSim("Customer","Client") = 0.125; identical attributes give
    // structSim 1, so the score is 0.6*0.125 + 0.4 = 0.475.
    Model old_m = parse_model("package p { class Customer { id: Int } }\n");
    Model new_m = parse_model("package p { class Client { id: Int } }\n");

    Matching strict = match_models(old_m, new_m);
    CHECK(strict.find_by_old(class_ref("p.Customer")) == nullptr);

    Matching loose = match_models(old_m, new_m, {}, 0.4);
    const MatchPair* pair = loose.find_by_old(class_ref("p.Customer"));
    REQUIRE(pair != nullptr);
    CHECK(pair->new_ref.str() == "p.Client");
    CHECK(pair->score == doctest::Approx(0.475));
}

TEST_CASE("greedy matching breaks ties on the old qualified name") {
    Model old_m = parse_model("package p { class Ax {}\n class Ay {} }\n");
    Model new_m = parse_model("package p { class Az {} }\n");
    // Both candidates score 0.6*0.5 + 0.4*1.0 = 0.7; "p.Ax" sorts first.
    Matching match = match_models(old_m, new_m);
    const MatchPair* pair = match.find_by_old(class_ref("p.Ax"));
    REQUIRE(pair != nullptr);
    CHECK(pair->new_ref.str() == "p.Az");
    CHECK(match.find_by_old(class_ref("p.Ay")) == nullptr);
}

TEST_CASE("attribute similarity only applies within matched classes") {
    Model old_m = parse_model("package p { class A { shared: Int } }\n");
    Model new_m = parse_model("package p { class Zq { shared: Int } }\n");
    // A and Zq stay unmatched (name similarity 0.0, attributes equal ->
    // 0.4 < 0.65), so their attributes must not pair either.
    Matching match = match_models(old_m, new_m);
    CHECK(match.find_by_old(class_ref("p.A")) == nullptr);
    CHECK(match.find_by_old(attr_ref("p.A#shared")) == nullptr);
}

TEST_CASE("renamed class presetting remaps the attribute subjects") {
    Model old_m = parse_model("package p { class A { x: Int } }\n");
    Model new_m = parse_model("package p { class B { y: Int } }\n");
    PresettingSet preset = parse_presettings(
        "renamed \"p.A\" to \"B\";\n"
        "renamed \"p.A#x\" to \"y\";\n");
    Matching match = match_models(old_m, new_m, preset);
    const MatchPair* cls = match.find_by_old(class_ref("p.A"));
    REQUIRE(cls != nullptr);
    CHECK(cls->new_ref.str() == "p.B");
    const MatchPair* attr = match.find_by_old(attr_ref("p.A#x"));
    REQUIRE(attr != nullptr);
    CHECK(attr->new_ref.str() == "p.B#y");

    // Attribute presettings resolve through class pairs regardless of their
    // position in the file.
    PresettingSet reversed = parse_presettings(
        "renamed \"p.A#x\" to \"y\";\n"
        "renamed \"p.A\" to \"B\";\n");
    Matching again = match_models(old_m, new_m, reversed);
    CHECK(again.find_by_old(attr_ref("p.A#x"))->new_ref.str() == "p.B#y");
}

TEST_CASE("moved class presetting names the new container as written") {
    Model old_m = parse_model("package a { class C { x: Int } }\npackage b {}\n");
    Model new_m = parse_model("package a {}\npackage b { class C { x: Int } }\n");
    PresettingSet preset = parse_presettings("moved \"a.C\" to \"b\";");
    Matching match = match_models(old_m, new_m, preset);
    const MatchPair* pair = match.find_by_old(class_ref("a.C"));
    REQUIRE(pair != nullptr);
    CHECK(pair->new_ref.str() == "b.C");
    // The attribute follows its class through exact matching.
    const MatchPair* attr = match.find_by_old(attr_ref("a.C#x"));
    REQUIRE(attr != nullptr);
    CHECK(attr->new_ref.str() == "b.C#x");
}

TEST_CASE("package rename presetting falls back from class to package") {
    Model old_m = parse_model("package util { class Helper {} }\n");
    Model new_m = parse_model("package common { class Helper {} }\n");
    PresettingSet preset = parse_presettings("renamed \"util\" to \"common\";");
    Matching match = match_models(old_m, new_m, preset);
    const MatchPair* pkg = match.find_by_old(package_ref("util"));
    REQUIRE(pkg != nullptr);
    CHECK(pkg->new_ref.str() == "common");
    CHECK(pkg->provenance == MatchProvenance::Preset);
    // Classes inside match exactly through the remapped container.
    const MatchPair* cls = match.find_by_old(class_ref("util.Helper"));
    REQUIRE(cls != nullptr);
    CHECK(cls->new_ref.str() == "common.Helper");
    CHECK(cls->provenance == MatchProvenance::Exact);
}

TEST_CASE("presetting errors are reported as MatchError") {
    Model old_m = parse_model("package p { class A {} }\n");
    Model new_m = parse_model("package p { class B {} }\n");

    PresettingSet missing_subject = parse_presettings("renamed \"p.Nope\" to \"B\";");
    CHECK_THROWS_AS(match_models(old_m, new_m, missing_subject), MatchError);

    PresettingSet missing_target = parse_presettings("renamed \"p.A\" to \"Zz\";");
    CHECK_THROWS_AS(match_models(old_m, new_m, missing_target), MatchError);

    PresettingSet moved_package = parse_presettings("moved \"p\" to \"q\";");
    CHECK_THROWS_AS(match_models(old_m, new_m, moved_package), MatchError);
}

TEST_CASE("matching stays injective") {
    Matching m;
    m.add({class_ref("a.X"), class_ref("b.X"), MatchProvenance::Exact, 1.0});
    CHECK_THROWS_AS(m.add({class_ref("a.X"), class_ref("b.Y"), MatchProvenance::Exact, 1.0}),
                    MatchError);
    CHECK_THROWS_AS(m.add({class_ref("a.Z"), class_ref("b.X"), MatchProvenance::Exact, 1.0}),
                    MatchError);
    CHECK_THROWS_AS(m.add({class_ref("a.Y"), package_ref("b"), MatchProvenance::Exact, 1.0}),
                    MatchError);
}

TEST_CASE("map_package rewrites the longest matched prefix") {
    Matching m;
    m.add({package_ref("a"), package_ref("q"), MatchProvenance::Preset, 1.0});
    m.add({package_ref("a.b"), package_ref("q.X"), MatchProvenance::Preset, 1.0});

    CHECK(m.map_package("a.b.c") == "q.X.c");
    CHECK(m.map_package("a.other") == "q.other");
    CHECK(m.map_package("a.b") == "q.X");
    CHECK(m.map_package("unrelated") == "unrelated");
    // Prefixes only apply on segment boundaries.
    CHECK(m.map_package("a.bc") == "q.bc");
    CHECK(m.map_package("ab.c") == "ab.c");
}

TEST_CASE("map_class prefers exact pairs over container rewriting") {
    Matching m;
    m.add({package_ref("a"), package_ref("q"), MatchProvenance::Preset, 1.0});
    m.add({class_ref("a.C"), class_ref("q.D"), MatchProvenance::Preset, 1.0});

    CHECK(m.map_class("a.C") == "q.D");
    CHECK(m.map_class("a.Other") == "q.Other");
    CHECK(m.map_class("TopLevel") == "TopLevel");
}

TEST_CASE("associations match by mapped ends and name") {
    Model old_m = parse_model(
        "package p { class A {}\n class B {} }\n"
        "association R [1] p.A -> [1] p.B\n"
        "association S [1] p.B -> [1] p.A\n");
    Model new_m = parse_model(
        "package p { class A {}\n class B {}\n class C {} }\n"
        "association R [1] p.A -> [1] p.B\n"
        "association S [1] p.B -> [1] p.C\n");
    Matching match = match_models(old_m, new_m);

    ElementRef r;
    r.kind = RefKind::Association;
    r.qname.segments = {"R"};
    const MatchPair* exact = match.find_by_old(r);
    REQUIRE(exact != nullptr);
    CHECK(exact->provenance == MatchProvenance::Exact);

    // S's target changed, so the triple no longer matches exactly; the
    // name-similarity stage pairs it up instead.
    ElementRef s;
    s.kind = RefKind::Association;
    s.qname.segments = {"S"};
    const MatchPair* fuzzy = match.find_by_old(s);
    REQUIRE(fuzzy != nullptr);
    CHECK(fuzzy->provenance == MatchProvenance::Similarity);
    CHECK(fuzzy->new_ref.str() == "S");
}
