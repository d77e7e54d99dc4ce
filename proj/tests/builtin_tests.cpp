#include "cdimpact/builtin.hpp"

#include "cdimpact/model_text.hpp"
#include "cdimpact/presettings.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

#include <filesystem>

using namespace cdimpact;
using testsupport::shared_model;

namespace {

DiffModel diff_texts(const char* old_text, const char* new_text) {
    auto old_m = shared_model(old_text);
    auto new_m = shared_model(new_text);
    return compute_diff(old_m, new_m, match_models(*old_m, *new_m));
}

}  // namespace

TEST_CASE("embedded builtin rule texts match the installed rule files") {
    namespace fs = std::filesystem;
    const fs::path dir = CDIMPACT_SOURCE_RULES_DIR;
    std::string concat;
    for (const char* name : {"orm.ir", "property.ir", "sql.ir", "xml_migration.ir"}) {
        std::string part = testsupport::read_file(dir / name);
        REQUIRE_FALSE(part.empty());
        concat += part;
    }
    CHECK(builtin_rules_text() == concat);
    CHECK(builtin_extensions_text() == testsupport::read_file(dir / "builtin.irx"));
}

TEST_CASE("builtin rules parse and validate cleanly") {
    RuleSet rs = parse_builtin_rules();
    REQUIRE(rs.rules.size() == 4);
    CHECK(rs.rules[0].name == kOrmRuleName);
    CHECK(rs.rules[1].name == kPropertyRuleName);
    CHECK(rs.rules[2].name == kSqlRuleName);
    CHECK(rs.rules[3].name == kXmlMigrationRuleName);

    std::vector<ExtensionDecl> exts = parse_builtin_extensions();
    REQUIRE(exts.size() == 1);
    CHECK(exts[0].name == "addedActiveClass");

    ExtensionRegistry registry;
    register_builtin_providers(registry);
    registry.add_extensions(exts);
    std::vector<Diagnostic> diags =
        validate(rs, exts, registry.condition_names(), registry.placeholder_names());
    CHECK(diags.empty());
}

TEST_CASE("naming conventions") {
    CHECK(to_table_name("TroubleCd", NamingConvention::UpperSnake) == "TROUBLE_CD");
    CHECK(to_table_name("ECU", NamingConvention::UpperSnake) == "ECU");
    CHECK(to_table_name("parkBrake", NamingConvention::UpperSnake) == "PARK_BRAKE");
    CHECK(to_table_name("TROUBLE_CD", NamingConvention::UpperSnake) == "TROUBLE_CD");
    CHECK(to_table_name("TroubleCd", NamingConvention::LowerSnake) == "trouble_cd");
    CHECK(to_table_name("TroubleCd", NamingConvention::AsIs) == "TroubleCd");
    CHECK(to_column_name("ownerId", NamingConvention::UpperSnake) == "OWNER_ID");
    CHECK(to_column_name("name", NamingConvention::UpperSnake) == "NAME");

    CHECK(derive_property_key("TroubleCd", PropertyKeyStyle::Upper) == "TROUBLECD");
    CHECK(derive_property_key("ECU", PropertyKeyStyle::Upper) == "ECU");
    CHECK(derive_property_key("TroubleCd", PropertyKeyStyle::UpperSnake) == "TROUBLE_CD");
    CHECK(derive_property_key("TroubleCd", PropertyKeyStyle::AsIs) == "TroubleCd");
}

TEST_CASE("orm mapping file parser") {
    OrmMappingFile orm = parse_orm_file(
        "# mapping for release 2\n"
        "class de.TroubleCd -> table TROUBLE_CD\n"
        "\n"
        "property de.TroubleCd#name -> column NAME\n");
    REQUIRE(orm.entries.size() == 2);
    CHECK(orm.entries[0].kind == OrmEntry::Kind::ClassMap);
    CHECK(orm.entries[0].model_ref == "de.TroubleCd");
    CHECK(orm.entries[0].db_name == "TROUBLE_CD");
    CHECK(orm.entries[0].line_text == "class de.TroubleCd -> table TROUBLE_CD");
    CHECK(orm.entries[0].line_no == 2);
    CHECK(orm.entries[1].kind == OrmEntry::Kind::PropertyMap);
    CHECK(orm.entries[1].line_no == 4);

    REQUIRE(orm.find_class("de.TroubleCd") != nullptr);
    CHECK(orm.find_class("de.TroubleCd")->db_name == "TROUBLE_CD");
    CHECK(orm.find_class("de.Other") == nullptr);
    REQUIRE(orm.find_property("de.TroubleCd#name") != nullptr);
    CHECK(orm.find_property("de.TroubleCd#name")->db_name == "NAME");

    CHECK_THROWS_AS(parse_orm_file("class a.B -> table T\nclass a.B -> table U\n"), ParseError);
    CHECK_THROWS_AS(parse_orm_file("class a.B table T\n"), ParseError);
    CHECK_THROWS_AS(parse_orm_file("class a.B -> chair T\n"), ParseError);
    CHECK_THROWS_AS(parse_orm_file("class a.B -> table T extra\n"), ParseError);
    // Class refs cannot name an attribute and property refs must.
    CHECK_THROWS_AS(parse_orm_file("class a.B#x -> table T\n"), ParseError);
    CHECK_THROWS_AS(parse_orm_file("property a.B -> column C\n"), ParseError);
}

TEST_CASE("property file parser") {
    PropertyFile props = parse_property_file(
        "# ui strings\n"
        "ECU = engine control unit\n"
        "ECUS=engine control units\n"
        "\n"
        "PATH = a=b\n");
    REQUIRE(props.entries.size() == 3);
    CHECK(props.entries[0] == std::pair<std::string, std::string>{"ECU", "engine control unit"});
    CHECK(props.entries[1] == std::pair<std::string, std::string>{"ECUS", "engine control units"});
    // Only the first '=' separates key and value.
    CHECK(props.entries[2] == std::pair<std::string, std::string>{"PATH", "a=b"});
    CHECK(props.has_key("ECU"));
    CHECK_FALSE(props.has_key("ecu"));

    CHECK_THROWS_AS(parse_property_file("A=1\nA=2\n"), ParseError);
    CHECK_THROWS_AS(parse_property_file("just a line\n"), ParseError);
}

TEST_CASE("scan index reads matching files recursively") {
    testsupport::TempDir tmp;
    namespace fs = std::filesystem;
    fs::create_directories(tmp.path() / "sub");
    testsupport::write_file(tmp.path() / "b.sql", "SELECT 1;\r\nSELECT 2;\n");
    testsupport::write_file(tmp.path() / "a.java", "int x;\n");
    testsupport::write_file(tmp.path() / "sub" / "c.txt", "hello\n");
    testsupport::write_file(tmp.path() / "skip.md", "ignored\n");

    ScanIndex index = build_scan_index(tmp.path());
    REQUIRE(index.files.size() == 3);
    CHECK(index.files[0].path == "a.java");
    CHECK(index.files[1].path == "b.sql");
    CHECK(index.files[2].path == "sub/c.txt");
    // Carriage returns are stripped.
    REQUIRE(index.files[1].lines.size() == 2);
    CHECK(index.files[1].lines[0] == "SELECT 1;");

    ScanIndex only_sql = build_scan_index(tmp.path(), {".sql"});
    REQUIRE(only_sql.files.size() == 1);
    CHECK(only_sql.files[0].path == "b.sql");

    CHECK_THROWS_AS(build_scan_index(tmp.path() / "missing"),
                    std::filesystem::filesystem_error);
}

TEST_CASE("sql scan finds word-boundary uses of old identifiers") {
    testsupport::TempDir tmp;
    testsupport::write_file(tmp.path() / "queries.sql",
                            "SELECT * FROM TROUBLE_CD;\n"
                            "-- TROUBLE_CD_ID is a different identifier\n"
                            "DELETE FROM XTROUBLE_CDX;\n"
                            "UPDATE TROUBLE_CD SET x = 1;\n");
    testsupport::write_file(tmp.path() / "code.java",
                            "int n = read(\"TROUBLE_CD\");\n"
                            "// lower case trouble_cd does not count\n");
    testsupport::write_file(tmp.path() / "notes.md", "TROUBLE_CD everywhere\n");

    DiffModel dm = diff_texts(
        "package de { <<persistent>> class TroubleCd { id: Int } }\n",
        "package de { <<persistent>> class TroubleCode { id: Int } }\n");
    REQUIRE(dm.entries().size() == 1);
    REQUIRE(dm.entries()[0].kind == DiffKind::RenamedClass);

    std::vector<SqlScanHit> hits = sql_scan(dm, tmp.path());
    REQUIRE(hits.size() == 3);
    // Ordered by path, then line.
    CHECK(hits[0].path == "code.java");
    CHECK(hits[0].line_no == 1);
    CHECK(hits[1].path == "queries.sql");
    CHECK(hits[1].line_no == 1);
    CHECK(hits[1].line_text == "SELECT * FROM TROUBLE_CD;");
    CHECK(hits[2].path == "queries.sql");
    CHECK(hits[2].line_no == 4);
    for (const auto& hit : hits) {
        CHECK(hit.identifier == "TROUBLE_CD");
        CHECK(hit.cause.kind == DiffKind::RenamedClass);
        CHECK(testsupport::oracle_word_hit(hit.line_text, hit.identifier));
    }
}

TEST_CASE("sql scan covers deleted attributes and skips non-persistent elements") {
    testsupport::TempDir tmp;
    testsupport::write_file(tmp.path() / "q.sql",
                            "SELECT OWNER_ID FROM CUSTOMER;\n"
                            "SELECT HELPER FROM T;\n");

    DiffModel dm = diff_texts(
        "package p {\n"
        "  <<persistent>> class Customer { <<persistent>> ownerId: Int\n id: Int }\n"
        "  class Helper { a: Int\n b: Int }\n"
        "}\n",
        "package p {\n"
        "  <<persistent>> class Customer { id: Int }\n"
        "}\n");

    std::vector<SqlScanHit> hits = sql_scan(dm, tmp.path());
    // Only the persistent attribute produces a hit; the deletion of the
    // non-persistent Helper class is ignored even though HELPER occurs.
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].identifier == "OWNER_ID");
    CHECK(hits[0].path == "q.sql");
    CHECK(hits[0].line_no == 1);
    CHECK(hits[0].cause.kind == DiffKind::DeletedAttribute);
}

TEST_CASE("orm analysis reports add, rename, and delete steps") {
    SUBCASE("added persistent active class") {
        DiffModel dm = diff_texts("package de { package test {} }\n",
                                  "package de { package test {"
                                  " <<persistent>> <<active>> class ECU {} } }\n");
        std::vector<ChecklistHint> hints = orm_analysis(dm, std::nullopt);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].rule_name == kOrmRuleName);
        CHECK(hints[0].text == "Add entry to mapping file for new class.");
        CHECK(hints[0].severity == Severity::Critical);
        CHECK(hints[0].relevant_for == "persistence");
        CHECK(hints[0].causing.kind == DiffKind::AddedClass);
        CHECK_FALSE(hints[0].unresolved);
    }
    SUBCASE("added class missing the active stereotype does not fire") {
        DiffModel dm = diff_texts("package de {}\n",
                                  "package de { <<persistent>> class ECU {} }\n");
        CHECK(orm_analysis(dm, std::nullopt).empty());
    }
    SUBCASE("renamed persistent attribute quotes the mapping file line") {
        DiffModel dm = diff_texts(
            "package de { class C { <<persistent>> name: String } }\n",
            "package de { class C { <<persistent>> newName: String } }\n");
        OrmMappingFile orm = parse_orm_file("property de.C#name -> column NAME\n");
        std::vector<ChecklistHint> hints = orm_analysis(dm, orm);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].text ==
              "Rename entry in mapping file. Excerpt from file: "
              "property de.C#name -> column NAME");
        CHECK_FALSE(hints[0].unresolved);
    }
    SUBCASE("missing mapping file leaves the excerpt unresolved") {
        DiffModel dm = diff_texts(
            "package de { class C { <<persistent>> name: String } }\n",
            "package de { class C { <<persistent>> newName: String } }\n");
        std::vector<ChecklistHint> hints = orm_analysis(dm, std::nullopt);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].text ==
              "Rename entry in mapping file. Excerpt from file: "
              "{ORMFileExcerpt:unresolved}");
        CHECK(hints[0].unresolved);
    }
    SUBCASE("deleted persistent class and attribute") {
        DiffModel dm = diff_texts(
            "package de { <<persistent>> class Gone { <<persistent>> x: Int } }\n",
            "package de {}\n");
        std::vector<ChecklistHint> hints = orm_analysis(dm, std::nullopt);
        REQUIRE(hints.size() == 2);
        CHECK(hints[0].text == "Delete entry for class 'de.Gone' from mapping file.");
        CHECK(hints[1].text == "Delete entry for attribute 'de.Gone#x' from mapping file.");
    }
}

TEST_CASE("property key analysis compares keys against the property file") {
    const char* old_text = "package de { package test {} }\n";
    const char* new_text =
        "package de { package test { <<persistent>> class ECU {} } }\n";

    SUBCASE("missing keys are reported for added classes") {
        DiffModel dm = diff_texts(old_text, new_text);
        std::vector<ChecklistHint> hints = property_key_analysis(dm, PropertyFile{});
        REQUIRE(hints.size() == 2);
        CHECK(hints[0].rule_name == kPropertyRuleName);
        CHECK(hints[0].text == "Add the entry ECU to the property file core.properties.");
        CHECK(hints[1].text == "Add the entry ECUS to the property file core.properties.");
    }
    SUBCASE("no property file counts as missing keys") {
        DiffModel dm = diff_texts(old_text, new_text);
        CHECK(property_key_analysis(dm, std::nullopt).size() == 2);
    }
    SUBCASE("present keys silence the add hints") {
        DiffModel dm = diff_texts(old_text, new_text);
        PropertyFile props = parse_property_file("ECU=a\nECUS=b\n");
        CHECK(property_key_analysis(dm, props).empty());

        PropertyFile only_singular = parse_property_file("ECU=a\n");
        std::vector<ChecklistHint> hints = property_key_analysis(dm, only_singular);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].text == "Add the entry ECUS to the property file core.properties.");
    }
    SUBCASE("deleted classes report stale keys") {
        DiffModel dm = diff_texts(new_text, old_text);
        PropertyFile props = parse_property_file("ECU=a\nECUS=b\n");
        std::vector<ChecklistHint> hints = property_key_analysis(dm, props);
        REQUIRE(hints.size() == 2);
        CHECK(hints[0].text == "Delete the entry ECU from the property file core.properties.");
        CHECK(hints[1].text == "Delete the entry ECUS from the property file core.properties.");

        // Without a property file there is nothing to delete.
        CHECK(property_key_analysis(dm, std::nullopt).empty());
    }
    SUBCASE("key style follows the configuration") {
        DiffModel dm = diff_texts("package p {}\n",
                                  "package p { <<persistent>> class TroubleCd {} }\n");
        std::vector<ChecklistHint> hints =
            property_key_analysis(dm, std::nullopt, PropertyKeyStyle::UpperSnake);
        REQUIRE(hints.size() == 2);
        CHECK(hints[0].text ==
              "Add the entry TROUBLE_CD to the property file core.properties.");
        CHECK(hints[1].text ==
              "Add the entry TROUBLE_CDS to the property file core.properties.");
    }
}

TEST_CASE("xml migration analysis proposes migration classes") {
    SUBCASE("deleted persistent class") {
        DiffModel dm = diff_texts("package p { <<persistent>> class Gone {} }\n",
                                  "package p {}\n");
        std::vector<ChecklistHint> hints = xml_migration_analysis(dm);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].rule_name == kXmlMigrationRuleName);
        CHECK(hints[0].text ==
              "Create a migration class that removes persisted instances of class 'p.Gone'.");
        CHECK(hints[0].probability == Probability::Medium);
    }
    SUBCASE("renamed persistent attribute gets a stub") {
        DiffModel dm = diff_texts(
            "package p { class C { <<persistent>> name: String } }\n",
            "package p { class C { <<persistent>> newName: String } }\n");
        std::vector<ChecklistHint> hints = xml_migration_analysis(dm);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].text ==
              "Create a migration class for the renamed element. Stub: "
              "migration { rename \"p.C#name\" to \"newName\" }");
    }
    SUBCASE("narrowed cardinality") {
        DiffModel dm = diff_texts("package p { class C { x: Int [0..*] } }\n",
                                  "package p { class C { x: Int } }\n");
        std::vector<ChecklistHint> hints = xml_migration_analysis(dm);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].text ==
              "Create a migration class that truncates persisted values. "
              "Changed cardinality of 'p.C#x' from '[0..*]' to '[1]'");
    }
    SUBCASE("widened cardinality is quiet") {
        DiffModel dm = diff_texts("package p { class C { x: Int } }\n",
                                  "package p { class C { x: Int [0..*] } }\n");
        CHECK(xml_migration_analysis(dm).empty());
    }
    SUBCASE("upper bound reduction counts as narrowing") {
        DiffModel dm = diff_texts("package p { class C { x: Int [0..5] } }\n",
                                  "package p { class C { x: Int [0..3] } }\n");
        CHECK(xml_migration_analysis(dm).size() == 1);
        DiffModel wide = diff_texts("package p { class C { x: Int [0..3] } }\n",
                                    "package p { class C { x: Int [0..5] } }\n");
        CHECK(xml_migration_analysis(wide).empty());
    }
    SUBCASE("type changes propose a conversion") {
        DiffModel dm = diff_texts("package p { class C { x: Int } }\n",
                                  "package p { class C { x: Text } }\n");
        std::vector<ChecklistHint> hints = xml_migration_analysis(dm);
        REQUIRE(hints.size() == 1);
        CHECK(hints[0].text ==
              "Create a migration class that converts persisted values. "
              "Changed type of 'p.C#x' from 'Int' to 'Text'");
    }
}

TEST_CASE("default scan extensions") {
    const std::vector<std::string>& exts = default_scan_extensions();
    CHECK(exts == std::vector<std::string>{".java", ".sql", ".xml", ".properties", ".txt"});
}
