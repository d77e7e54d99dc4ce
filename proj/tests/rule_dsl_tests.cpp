#include "cdimpact/rule_ast.hpp"
#include "cdimpact/rule_text.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

#include <algorithm>

using namespace cdimpact;

namespace {

// Verbatim rule text as printed in the ORM analysis example, including the
// line wrap inside the second hint string.
const char* kOrmExampleText =
    "impactRule \"ORM File Analysis\" {\n"
    "  description = \"This rule checks ...\"\n"
    "  impact {\n"
    "    pc.addedPersistentClass() && addedActiveClass() =>\n"
    "    \"Add entry to mapping file for new class.\"\n"
    "    pc.renamedPersistentAttribute() => \"Rename entry in\n"
    "    mapping file. Excerpt from file: {ORMFileExcerpt}\"\n"
    "  }\n"
    "}\n";

bool has_diag(const std::vector<Diagnostic>& diags, const char* code, bool error) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
        return d.code == code && d.is_error() == error;
    });
}

int error_count(const std::vector<Diagnostic>& diags) {
    return static_cast<int>(std::count_if(diags.begin(), diags.end(),
                                          [](const Diagnostic& d) { return d.is_error(); }));
}

}  // namespace

TEST_CASE("the ORM example rule parses into the expected tree") {
    RuleSet rs = parse_rules(kOrmExampleText);
    REQUIRE(rs.rules.size() == 1);
    const ImpactRuleDecl& rule = rs.rules[0];
    CHECK(rule.name == "ORM File Analysis");
    CHECK(rule.description == "This rule checks ...");
    CHECK_FALSE(rule.severity.has_value());
    CHECK_FALSE(rule.probability.has_value());
    CHECK_FALSE(rule.relevant_for.has_value());
    REQUIRE(rule.entries.size() == 2);

    const ImpactEntry& first = rule.entries[0];
    REQUIRE(first.condition != nullptr);
    CHECK(first.condition->op == ConditionExpr::Op::And);
    REQUIRE(first.condition->children.size() == 2);
    CHECK(first.condition->children[0]->op == ConditionExpr::Op::PredefinedCall);
    CHECK(first.condition->children[0]->callee == "addedPersistentClass");
    CHECK(first.condition->children[0]->args.empty());
    CHECK(first.condition->children[1]->op == ConditionExpr::Op::UserCall);
    CHECK(first.condition->children[1]->callee == "addedActiveClass");
    REQUIRE(first.hint.segments.size() == 1);
    CHECK(first.hint.segments[0].kind == HintSegment::Kind::Literal);
    CHECK(first.hint.segments[0].text == "Add entry to mapping file for new class.");

    const ImpactEntry& second = rule.entries[1];
    CHECK(second.condition->op == ConditionExpr::Op::PredefinedCall);
    CHECK(second.condition->callee == "renamedPersistentAttribute");
    // The raw line break inside the string collapses to one space.
    REQUIRE(second.hint.segments.size() == 2);
    CHECK(second.hint.segments[0].kind == HintSegment::Kind::Literal);
    CHECK(second.hint.segments[0].text == "Rename entry in mapping file. Excerpt from file: ");
    CHECK(second.hint.segments[1].kind == HintSegment::Kind::Placeholder);
    CHECK(second.hint.segments[1].text == "ORMFileExcerpt");
}

TEST_CASE("printing and reparsing preserves the rule set") {
    RuleSet rs = parse_rules(kOrmExampleText);
    std::string printed = print_rules(rs);
    RuleSet again = parse_rules(printed);
    CHECK(equal_rule_set(rs, again));
    // Printing is a fixed point.
    CHECK(print_rules(again) == printed);
}

TEST_CASE("metadata fields parse in any order, each at most once") {
    RuleSet rs = parse_rules(
        "impactRule \"R\" {\n"
        "  relevantFor = \"dbteam\"\n"
        "  severity = critical\n"
        "  description = \"d\"\n"
        "  probability = low\n"
        "  impact {}\n"
        "}\n");
    const ImpactRuleDecl& r = rs.rules[0];
    CHECK(r.severity == Severity::Critical);
    CHECK(r.probability == Probability::Low);
    CHECK(r.relevant_for == "dbteam");
    CHECK(r.entries.empty());

    CHECK_THROWS_AS(parse_rules("impactRule \"R\" {\n"
                                "  description = \"a\"\n  description = \"b\"\n  impact {}\n}\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" { impact {} }\n"), ParseError);
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" {\n"
                                "  description = \"d\"\n  severity = huge\n  impact {}\n}\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" {\n"
                                "  description = \"d\"\n  impact {}\n  severity = minor\n}\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" { description = \"d\" }\n"), ParseError);
}

TEST_CASE("operator precedence is not, and, or") {
    RuleSet rs = parse_rules(
        "impactRule \"R\" {\n"
        "  description = \"d\"\n"
        "  impact { pc.addedClass() && alpha() || !beta() => \"h\" }\n"
        "}\n");
    const ConditionExpr& root = *rs.rules[0].entries[0].condition;
    REQUIRE(root.op == ConditionExpr::Op::Or);
    CHECK(root.children[0]->op == ConditionExpr::Op::And);
    CHECK(root.children[1]->op == ConditionExpr::Op::Not);
    CHECK(root.children[1]->children[0]->callee == "beta");

    RuleSet grouped = parse_rules(
        "impactRule \"R\" {\n"
        "  description = \"d\"\n"
        "  impact { pc.addedClass() && (alpha() || !beta()) => \"h\" }\n"
        "}\n");
    const ConditionExpr& groot = *grouped.rules[0].entries[0].condition;
    REQUIRE(groot.op == ConditionExpr::Op::And);
    CHECK(groot.children[1]->op == ConditionExpr::Op::Or);
    CHECK_FALSE(equal_rule_set(rs, grouped));

    // && chains associate to the left.
    RuleSet chain = parse_rules(
        "impactRule \"R\" {\n"
        "  description = \"d\"\n"
        "  impact { a() && b() && c() => \"h\" }\n"
        "}\n");
    const ConditionExpr& croot = *chain.rules[0].entries[0].condition;
    REQUIRE(croot.op == ConditionExpr::Op::And);
    CHECK(croot.children[0]->op == ConditionExpr::Op::And);
    CHECK(croot.children[1]->callee == "c");
}

TEST_CASE("conditions accept string arguments") {
    RuleSet rs = parse_rules(
        "impactRule \"R\" {\n"
        "  description = \"d\"\n"
        "  impact { pc.elementHasStereotype(\"persistent\") && mine(\"a\", \"b\") => \"h\" }\n"
        "}\n");
    const ConditionExpr& root = *rs.rules[0].entries[0].condition;
    CHECK(root.children[0]->args == std::vector<std::string>{"persistent"});
    CHECK(root.children[1]->args == std::vector<std::string>{"a", "b"});
}

TEST_CASE("string escapes and brace handling in hints") {
    RuleSet rs = parse_rules(
        "impactRule \"R\" {\n"
        "  description = \"say \\\"hi\\\"\\nnew line\"\n"
        "  impact { pc.addedClass() => \"literal \\{braces\\} and {element.name} end\" }\n"
        "}\n");
    CHECK(rs.rules[0].description == "say \"hi\"\nnew line");
    const HintTemplate& hint = rs.rules[0].entries[0].hint;
    REQUIRE(hint.segments.size() == 3);
    CHECK(hint.segments[0].text == "literal {braces} and ");
    CHECK(hint.segments[1].kind == HintSegment::Kind::Placeholder);
    CHECK(hint.segments[1].text == "element.name");
    CHECK(hint.segments[2].text == " end");

    // A bare closing brace cannot appear in a hint.
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" {\n"
                                "  description = \"d\"\n"
                                "  impact { pc.addedClass() => \"oops } here\" }\n"
                                "}\n"),
                    ParseError);
    // Placeholder names are dotted identifiers.
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" {\n"
                                "  description = \"d\"\n"
                                "  impact { pc.addedClass() => \"{9bad}\" }\n"
                                "}\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" {\n"
                                "  description = \"d\"\n"
                                "  impact { pc.addedClass() => \"{unclosed\" }\n"
                                "}\n"),
                    ParseError);
}

TEST_CASE("duplicate rule names are rejected") {
    CHECK_THROWS_AS(parse_rules("impactRule \"R\" { description = \"a\" impact {} }\n"
                                "impactRule \"R\" { description = \"b\" impact {} }\n"),
                    ParseError);
}

TEST_CASE("rule files may hold several rules and comments") {
    RuleSet rs = parse_rules(
        "// first\n"
        "impactRule \"A\" { description = \"a\" impact {} }\n"
        "// second\n"
        "impactRule \"B\" { description = \"b\" impact {} }\n");
    CHECK(rs.rules.size() == 2);
    CHECK(rs.find("A") != nullptr);
    CHECK(rs.find("B") != nullptr);
    CHECK(rs.find("C") == nullptr);
    CHECK(parse_rules("").empty());
}

TEST_CASE("extension files define conditions and placeholders") {
    std::vector<ExtensionDecl> exts = parse_extensions(
        "// extras\n"
        "define condition addedActiveClass = pc.addedClass() && "
        "pc.elementHasStereotype(\"active\");\n"
        "define placeholder ORMFileExcerpt = orm.excerpt(\"mapping\" \"v2\");\n");
    REQUIRE(exts.size() == 2);
    CHECK(exts[0].kind == ExtensionDecl::Kind::Condition);
    CHECK(exts[0].name == "addedActiveClass");
    REQUIRE(exts[0].body != nullptr);
    CHECK(exts[0].body->op == ConditionExpr::Op::And);
    CHECK(exts[1].kind == ExtensionDecl::Kind::Placeholder);
    CHECK(exts[1].name == "ORMFileExcerpt");
    CHECK(exts[1].provider == "orm.excerpt");
    CHECK(exts[1].provider_args == std::vector<std::string>{"mapping", "v2"});

    std::string printed = print_extensions(exts);
    std::vector<ExtensionDecl> again = parse_extensions(printed);
    REQUIRE(again.size() == 2);
    CHECK(again[0].name == exts[0].name);
    CHECK(equal_condition(*again[0].body, *exts[0].body));
    CHECK(again[1].provider == exts[1].provider);
    CHECK(again[1].provider_args == exts[1].provider_args);
}

TEST_CASE("extension files reject duplicates and cycles") {
    CHECK_THROWS_AS(parse_extensions("define condition a = pc.addedClass();\n"
                                     "define condition a = pc.deletedClass();\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_extensions("define condition a = b();\n"
                                     "define condition b = a();\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_extensions("define condition a = a();\n"), ParseError);
    // Forward references within a file are fine when acyclic.
    std::vector<ExtensionDecl> ok = parse_extensions(
        "define condition a = b() && pc.addedClass();\n"
        "define condition b = pc.deletedClass();\n");
    CHECK(ok.size() == 2);
}

TEST_CASE("predefined catalog covers every difference kind") {
    const auto& catalog = predefined_catalog();
    CHECK(catalog.size() == 26);
    int zero_arity = 0;
    for (const auto& sig : catalog) {
        if (sig.arity == 0) ++zero_arity;
    }
    // 19 kind conditions + 5 persistent shorthands take no arguments.
    CHECK(zero_arity == 24);
    CHECK(is_predefined_condition("addedClass"));
    CHECK(is_predefined_condition("changedAssociationEnd"));
    CHECK(is_predefined_condition("elementHasStereotype"));
    CHECK(is_predefined_condition("elementNameMatches"));
    CHECK(is_predefined_condition("renamedPersistentAttribute"));
    CHECK_FALSE(is_predefined_condition("somethingElse"));
}

TEST_CASE("validate reports unknown predefined conditions and arity errors") {
    RuleSet rs = parse_rules(
        "impactRule \"R\" {\n"
        "  description = \"d\"\n"
        "  impact {\n"
        "    pc.bogus() => \"a\"\n"
        "    pc.elementHasStereotype() => \"b\"\n"
        "    pc.addedClass(\"x\") => \"c\"\n"
        "  }\n"
        "}\n");
    std::vector<Diagnostic> diags = validate(rs, {});
    CHECK(has_diag(diags, "UNKNOWN_PREDEFINED", true));
    CHECK(has_diag(diags, "ARITY_MISMATCH", true));
    CHECK(error_count(diags) == 3);
}

TEST_CASE("validate warns about unresolved names and accepts known ones") {
    RuleSet rs = parse_rules(
        "impactRule \"R\" {\n"
        "  description = \"d\"\n"
        "  impact { mystery() => \"{element.name} and {puzzle}\" }\n"
        "}\n");

    std::vector<Diagnostic> bare = validate(rs, {});
    CHECK(error_count(bare) == 0);
    CHECK(has_diag(bare, "UNRESOLVED_CONDITION", false));
    CHECK(has_diag(bare, "UNRESOLVED_PLACEHOLDER", false));
    // element.name is a builtin and never warned about.
    int placeholder_warnings = 0;
    for (const auto& d : bare)
        if (d.code == "UNRESOLVED_PLACEHOLDER") ++placeholder_warnings;
    CHECK(placeholder_warnings == 1);

    std::vector<Diagnostic> registered = validate(rs, {}, {"mystery"}, {"puzzle"});
    CHECK(registered.empty());

    std::vector<ExtensionDecl> exts = parse_extensions(
        "define condition mystery = pc.addedClass();\n");
    std::vector<Diagnostic> with_ext = validate(rs, exts, {}, {"puzzle"});
    CHECK(with_ext.empty());
}

TEST_CASE("validate checks extension bodies and providers") {
    RuleSet empty;
    std::vector<ExtensionDecl> bad_body =
        parse_extensions("define condition c = pc.notReal();\n");
    CHECK(has_diag(validate(empty, bad_body), "UNKNOWN_PREDEFINED", true));

    std::vector<ExtensionDecl> bad_provider =
        parse_extensions("define placeholder p = nobody.home();\n");
    CHECK(has_diag(validate(empty, bad_provider), "UNKNOWN_PROVIDER", true));
    CHECK(validate(empty, bad_provider, {}, {"nobody.home"}).empty());
}

TEST_CASE("severity and probability names map both ways") {
    CHECK(severity_from_string("minor") == Severity::Minor);
    CHECK(severity_from_string("normal") == Severity::Normal);
    CHECK(severity_from_string("critical") == Severity::Critical);
    CHECK_FALSE(severity_from_string("huge").has_value());
    CHECK(to_string(Severity::Critical) == "critical");
    CHECK(probability_from_string("low") == Probability::Low);
    CHECK(probability_from_string("medium") == Probability::Medium);
    CHECK(probability_from_string("high") == Probability::High);
    CHECK_FALSE(probability_from_string("certain").has_value());
    CHECK(to_string(Probability::Medium) == "medium");
}
