#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdimpact/engine.hpp"
#include "cdimpact/rule_text.hpp"

namespace cdimpact {

// UpperSnake inserts '_' at every lower-to-upper boundary and uppercases:
// "TroubleCd" -> "TROUBLE_CD". LowerSnake lowercases instead; AsIs is the
// identity. Both snake forms are idempotent.
std::string to_table_name(std::string_view class_name, NamingConvention conv);
std::string to_column_name(std::string_view attr_name, NamingConvention conv);

// Base property key for a class name; the plural key appends "S".
std::string derive_property_key(std::string_view class_name, PropertyKeyStyle style);

// Mapping file format, one entry per line, '#' starts a comment line:
//   class de.TroubleCd -> table TROUBLE_CD
//   property de.TroubleCd#name -> column NAME
OrmMappingFile parse_orm_file(std::string_view text);

// key=value lines, '#' comment lines, keys unique, order preserved.
PropertyFile parse_property_file(std::string_view text);

const std::vector<std::string>& default_scan_extensions();  // .java .sql .xml .properties .txt

// Reads all regular files under root with a matching extension, sorted by
// path. Paths in the index are relative to root.
ScanIndex build_scan_index(const std::filesystem::path& root,
                           const std::vector<std::string>& extensions = default_scan_extensions());

struct SqlScanHit {
    std::string path;
    int line_no = 0;  // 1-based
    std::string identifier;
    std::string line_text;
    ModelDifference cause;

    bool operator==(const SqlScanHit&) const = default;
};

// For every difference that renames or deletes a persistent class or
// attribute, searches the index for word-boundary occurrences of the old
// table/column identifier. Hits are ordered by difference, then path, then
// line.
std::vector<SqlScanHit> sql_scan(const DiffModel& dm, const ScanIndex& index,
                                 NamingConvention conv = NamingConvention::UpperSnake,
                                 const std::string& persistent_stereotype = "persistent");
std::vector<SqlScanHit> sql_scan(const DiffModel& dm, const std::filesystem::path& root,
                                 NamingConvention conv = NamingConvention::UpperSnake,
                                 const std::string& persistent_stereotype = "persistent");

// The analysis rules shipped with the tool, as rule-DSL text. The same
// content is installed as files under share/cdimpact/rules.
const std::string& builtin_rules_text();
const std::string& builtin_extensions_text();
extern const char* const kOrmRuleName;           // "ORM file analysis"
extern const char* const kPropertyRuleName;      // "Property file analysis"
extern const char* const kSqlRuleName;           // "SQL query analysis"
extern const char* const kXmlMigrationRuleName;  // "XML migration analysis"

RuleSet parse_builtin_rules();
std::vector<ExtensionDecl> parse_builtin_extensions();

// Registers the condition and placeholder providers the builtin rules use
// (cardinalityNarrowed, sqlUsageFound, property key checks, ORMFileExcerpt,
// migrationStub, sqlOccurrences, ...). Providers read their inputs from
// EngineConfig.
void register_builtin_providers(ExtensionRegistry& registry);

// Convenience wrappers that run exactly one builtin rule through the normal
// rule engine path.
std::vector<ChecklistHint> orm_analysis(const DiffModel& dm,
                                        const std::optional<OrmMappingFile>& orm,
                                        NamingConvention conv = NamingConvention::UpperSnake,
                                        const std::string& persistent_stereotype = "persistent");
std::vector<ChecklistHint> property_key_analysis(
    const DiffModel& dm, const std::optional<PropertyFile>& properties,
    PropertyKeyStyle style = PropertyKeyStyle::Upper,
    const std::string& persistent_stereotype = "persistent");
std::vector<ChecklistHint> xml_migration_analysis(
    const DiffModel& dm, const std::string& persistent_stereotype = "persistent");

}  // namespace cdimpact
