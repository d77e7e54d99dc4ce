#include "cdimpact/builtin.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace cdimpact {

namespace {

// Embedded copies of the files under core/rules/; a test keeps them in sync.
constexpr const char* kOrmRuleText =
    R"ir(// Object-relational mapping maintenance steps for persistent model elements.
impactRule "ORM file analysis" {
  description = "Reports entries of the object-relational mapping file that have to be added, changed or deleted."
  severity = critical
  relevantFor = "persistence"

  impact {
    pc.addedPersistentClass() && addedActiveClass() =>
      "Add entry to mapping file for new class."
    pc.renamedPersistentAttribute() =>
      "Rename entry in mapping file. Excerpt from file: {ORMFileExcerpt}"
    pc.deletedPersistentClass() =>
      "Delete entry for class '{element.qualifiedName}' from mapping file."
    pc.deletedPersistentAttribute() =>
      "Delete entry for attribute '{element.qualifiedName}' from mapping file."
  }
}
)ir";

constexpr const char* kPropertyRuleText =
    R"ir(// Keeps the user-facing property file aligned with the persistent classes.
impactRule "Property file analysis" {
  description = "Reports keys that have to be added to or deleted from the property file."
  relevantFor = "ui"

  impact {
    propertyKeyMissing() =>
      "Add the entry {propertyKey} to the property file {propertyFileName}."
    pluralPropertyKeyMissing() =>
      "Add the entry {pluralPropertyKey} to the property file {propertyFileName}."
    propertyKeyPresent() =>
      "Delete the entry {propertyKey} from the property file {propertyFileName}."
    pluralPropertyKeyPresent() =>
      "Delete the entry {pluralPropertyKey} from the property file {propertyFileName}."
  }
}
)ir";

constexpr const char* kSqlRuleText =
    R"ir(// Lexical scan of the configured sources for old table and column names.
impactRule "SQL query analysis" {
  description = "Finds SQL queries that refer to table or column names of renamed or deleted persistent elements."
  severity = critical
  relevantFor = "persistence"

  impact {
    sqlUsageFound() =>
      "Update SQL queries referring to '{sqlIdentifier}'. Occurrences: {sqlOccurrences}"
  }
}
)ir";

constexpr const char* kXmlMigrationRuleText =
    R"ir(// Migration steps for XML documents that persist instances of the model.
impactRule "XML migration analysis" {
  description = "Proposes migration classes for persisted XML data affected by structural changes."
  probability = medium
  relevantFor = "migration"

  impact {
    pc.deletedPersistentClass() =>
      "Create a migration class that removes persisted instances of class '{element.qualifiedName}'."
    pc.deletedPersistentAttribute() =>
      "Create a migration class that removes element '{element.qualifiedName}' from persisted documents."
    pc.renamedPersistentAttribute() =>
      "Create a migration class for the renamed element. Stub: {migrationStub}"
    cardinalityNarrowed() =>
      "Create a migration class that truncates persisted values. {change.description}"
    pc.changedAttributeType() =>
      "Create a migration class that converts persisted values. {change.description}"
  }
}
)ir";

constexpr const char* kExtensionsText =
    R"ir(// Active classes carry the 'active' stereotype.
define condition addedActiveClass = pc.addedClass() && pc.elementHasStereotype("active");
)ir";

std::string snake_case(std::string_view name, bool upper) {
    std::string out;
    for (std::size_t i = 0; i < name.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(name[i]);
        if (i > 0 && std::islower(static_cast<unsigned char>(name[i - 1])) && std::isupper(c))
            out += '_';
        out += static_cast<char>(upper ? std::toupper(c) : std::tolower(c));
    }
    return out;
}

// Iterates lines without losing line numbers or verbatim text.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line(eol == std::string_view::npos ? text.substr(pos)
                                                       : text.substr(pos, eol - pos));
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        fn(++line_no, line);
    }
}

std::string trim(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find_last_not_of(" \t");
    return text.substr(begin, end - begin + 1);
}

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool line_has_word(const std::string& line, const std::string& identifier) {
    if (identifier.empty()) return false;
    std::size_t pos = 0;
    while ((pos = line.find(identifier, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !word_char(line[pos - 1]);
        std::size_t end = pos + identifier.size();
        bool right_ok = end == line.size() || !word_char(line[end]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

// The old-model identifier a rename/delete of a persistent element leaves
// behind in SQL text; nullopt when the difference has no such identifier.
std::optional<std::string> affected_identifier(const ModelDifference& d, const Model& old_model,
                                               NamingConvention conv,
                                               const std::string& persistent) {
    switch (d.kind) {
        case DiffKind::RenamedClass:
        case DiffKind::DeletedClass: {
            const ClassDecl* cls = old_model.find_class(d.subject.str());
            if (!cls || !cls->has_stereotype(persistent)) return std::nullopt;
            return to_table_name(cls->name, conv);
        }
        case DiffKind::RenamedAttribute:
        case DiffKind::DeletedAttribute: {
            const std::string class_qname = d.subject.qname.container().str();
            const Attribute* attr =
                old_model.find_attribute(class_qname, *d.subject.qname.attribute);
            if (!attr || !attr->has_stereotype(persistent)) return std::nullopt;
            return to_column_name(attr->name, conv);
        }
        default:
            return std::nullopt;
    }
}

std::optional<Cardinality> parse_cardinality_value(const std::optional<std::string>& text) {
    if (!text || text->size() < 3 || text->front() != '[' || text->back() != ']')
        return std::nullopt;
    std::string body = text->substr(1, text->size() - 2);
    std::size_t dots = body.find("..");
    Cardinality card;
    try {
        if (dots == std::string::npos) {
            card.lower = static_cast<unsigned>(std::stoul(body));
            card.upper = card.lower;
        } else {
            card.lower = static_cast<unsigned>(std::stoul(body.substr(0, dots)));
            std::string upper = body.substr(dots + 2);
            if (upper == "*")
                card.upper.reset();
            else
                card.upper = static_cast<unsigned>(std::stoul(upper));
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return card;
}

std::optional<std::string> subject_property_key(const EvaluationContext& ctx, bool plural) {
    if (ctx.current.subject.kind != RefKind::Class) return std::nullopt;
    std::string key = derive_property_key(ctx.current.subject.qname.simple_name(),
                                          ctx.config.property_key_style);
    if (plural) key += "S";
    return key;
}

std::vector<SqlScanHit> scan_hits_for(const ModelDifference& d, const Model& old_model,
                                      const ScanIndex& index, NamingConvention conv,
                                      const std::string& persistent) {
    std::vector<SqlScanHit> hits;
    std::optional<std::string> identifier = affected_identifier(d, old_model, conv, persistent);
    if (!identifier) return hits;
    for (const ScannedFile& file : index.files) {
        for (std::size_t i = 0; i < file.lines.size(); ++i) {
            if (!line_has_word(file.lines[i], *identifier)) continue;
            hits.push_back({file.path, static_cast<int>(i) + 1, *identifier, file.lines[i], d});
        }
    }
    return hits;
}

std::vector<ChecklistHint> run_builtin_rule(const char* rule_name, const DiffModel& dm,
                                            const EngineConfig& config) {
    RuleSet rules = parse_builtin_rules();
    const ImpactRuleDecl* rule = rules.find(rule_name);
    ExtensionRegistry registry;
    register_builtin_providers(registry);
    registry.add_extensions(parse_builtin_extensions());
    return evaluate_rule(*rule, dm, registry, config, UnresolvedPolicy::Flag);
}

}  // namespace

std::string to_table_name(std::string_view class_name, NamingConvention conv) {
    switch (conv) {
        case NamingConvention::UpperSnake: return snake_case(class_name, true);
        case NamingConvention::LowerSnake: return snake_case(class_name, false);
        case NamingConvention::AsIs: return std::string(class_name);
    }
    return std::string(class_name);
}

std::string to_column_name(std::string_view attr_name, NamingConvention conv) {
    return to_table_name(attr_name, conv);
}

std::string derive_property_key(std::string_view class_name, PropertyKeyStyle style) {
    switch (style) {
        case PropertyKeyStyle::Upper: {
            std::string out(class_name);
            std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
                return static_cast<char>(std::toupper(c));
            });
            return out;
        }
        case PropertyKeyStyle::UpperSnake: return snake_case(class_name, true);
        case PropertyKeyStyle::AsIs: return std::string(class_name);
    }
    return std::string(class_name);
}

OrmMappingFile parse_orm_file(std::string_view text) {
    OrmMappingFile file;
    std::set<std::string> seen;
    for_each_line(text, [&](int line_no, const std::string& line) {
        std::istringstream iss(line);
        std::string first;
        if (!(iss >> first) || first[0] == '#') return;
        OrmEntry entry;
        entry.line_no = line_no;
        entry.line_text = line;
        if (first == "class") {
            entry.kind = OrmEntry::Kind::ClassMap;
        } else if (first == "property") {
            entry.kind = OrmEntry::Kind::PropertyMap;
        } else {
            throw ParseError("expected 'class' or 'property', got '" + first + "'",
                             {line_no, 1});
        }
        std::string ref, arrow, column_word, db_name, extra;
        if (!(iss >> ref >> arrow >> column_word >> db_name))
            throw ParseError("malformed mapping line", {line_no, 1});
        if (iss >> extra)
            throw ParseError("unexpected trailing text '" + extra + "'", {line_no, 1});
        if (arrow != "->") throw ParseError("expected '->', got '" + arrow + "'", {line_no, 1});
        const char* want = entry.kind == OrmEntry::Kind::ClassMap ? "table" : "column";
        if (column_word != want)
            throw ParseError("expected '" + std::string(want) + "', got '" + column_word + "'",
                             {line_no, 1});
        QualifiedName qname;
        try {
            qname = QualifiedName::parse(ref);
        } catch (const ModelError& e) {
            throw ParseError(e.what(), {line_no, 1});
        }
        if (qname.has_attribute() != (entry.kind == OrmEntry::Kind::PropertyMap))
            throw ParseError("mapping kind does not match reference '" + ref + "'", {line_no, 1});
        if (!is_identifier(db_name))
            throw ParseError("invalid name '" + db_name + "'", {line_no, 1});
        if (!seen.insert(ref).second)
            throw ParseError("duplicate mapping for '" + ref + "'", {line_no, 1});
        entry.model_ref = ref;
        entry.db_name = db_name;
        file.entries.push_back(std::move(entry));
    });
    return file;
}

PropertyFile parse_property_file(std::string_view text) {
    PropertyFile file;
    for_each_line(text, [&](int line_no, const std::string& raw_line) {
        std::string line = trim(raw_line);
        if (line.empty() || line[0] == '#') return;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key=value'", {line_no, 1});
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty property key", {line_no, 1});
        if (file.has_key(key))
            throw ParseError("duplicate property key '" + key + "'", {line_no, 1});
        file.entries.emplace_back(std::move(key), std::move(value));
    });
    return file;
}

const std::vector<std::string>& default_scan_extensions() {
    static const std::vector<std::string> extensions = {".java", ".sql", ".xml", ".properties",
                                                        ".txt"};
    return extensions;
}

ScanIndex build_scan_index(const std::filesystem::path& root,
                           const std::vector<std::string>& extensions) {
    ScanIndex index;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        if (std::find(extensions.begin(), extensions.end(), ext) == extensions.end()) continue;
        std::ifstream in(entry.path());
        if (!in) continue;  // unreadable files are skipped
        ScannedFile file;
        file.path = std::filesystem::relative(entry.path(), root).generic_string();
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            file.lines.push_back(line);
        }
        index.files.push_back(std::move(file));
    }
    std::sort(index.files.begin(), index.files.end(),
              [](const ScannedFile& a, const ScannedFile& b) { return a.path < b.path; });
    return index;
}

std::vector<SqlScanHit> sql_scan(const DiffModel& dm, const ScanIndex& index,
                                 NamingConvention conv, const std::string& persistent_stereotype) {
    std::vector<SqlScanHit> hits;
    for (const ModelDifference& d : dm.entries()) {
        std::vector<SqlScanHit> found =
            scan_hits_for(d, dm.old_model(), index, conv, persistent_stereotype);
        hits.insert(hits.end(), found.begin(), found.end());
    }
    return hits;
}

std::vector<SqlScanHit> sql_scan(const DiffModel& dm, const std::filesystem::path& root,
                                 NamingConvention conv, const std::string& persistent_stereotype) {
    return sql_scan(dm, build_scan_index(root), conv, persistent_stereotype);
}

const std::string& builtin_rules_text() {
    static const std::string text = std::string(kOrmRuleText) + kPropertyRuleText + kSqlRuleText +
                                    kXmlMigrationRuleText;
    return text;
}

const std::string& builtin_extensions_text() {
    static const std::string text = kExtensionsText;
    return text;
}

const char* const kOrmRuleName = "ORM file analysis";
const char* const kPropertyRuleName = "Property file analysis";
const char* const kSqlRuleName = "SQL query analysis";
const char* const kXmlMigrationRuleName = "XML migration analysis";

RuleSet parse_builtin_rules() { return parse_rules(builtin_rules_text()); }

std::vector<ExtensionDecl> parse_builtin_extensions() {
    return parse_extensions(builtin_extensions_text());
}

void register_builtin_providers(ExtensionRegistry& registry) {
    registry.register_condition("cardinalityNarrowed", [](const EvaluationContext& ctx) {
        if (ctx.current.kind != DiffKind::ChangedAttributeCardinality) return false;
        std::optional<Cardinality> old_card = parse_cardinality_value(ctx.current.old_value);
        std::optional<Cardinality> new_card = parse_cardinality_value(ctx.current.new_value);
        if (!old_card || !new_card) return false;
        if (new_card->lower > old_card->lower) return true;
        return new_card->bounded() &&
               (!old_card->bounded() || *new_card->upper < *old_card->upper);
    });
    registry.register_condition("sqlUsageFound", [](const EvaluationContext& ctx) {
        if (!ctx.config.sources) return false;
        return !scan_hits_for(ctx.current, ctx.old_model, *ctx.config.sources, ctx.config.naming,
                              ctx.config.persistent_stereotype)
                    .empty();
    });
    registry.register_condition("propertyKeyMissing", [](const EvaluationContext& ctx) {
        if (!eval_predefined("addedPersistentClass", {}, ctx)) return false;
        std::optional<std::string> key = subject_property_key(ctx, false);
        return key && (!ctx.config.property_file || !ctx.config.property_file->has_key(*key));
    });
    registry.register_condition("pluralPropertyKeyMissing", [](const EvaluationContext& ctx) {
        if (!eval_predefined("addedPersistentClass", {}, ctx)) return false;
        std::optional<std::string> key = subject_property_key(ctx, true);
        return key && (!ctx.config.property_file || !ctx.config.property_file->has_key(*key));
    });
    registry.register_condition("propertyKeyPresent", [](const EvaluationContext& ctx) {
        if (!eval_predefined("deletedPersistentClass", {}, ctx)) return false;
        if (!ctx.config.property_file) return false;
        std::optional<std::string> key = subject_property_key(ctx, false);
        return key && ctx.config.property_file->has_key(*key);
    });
    registry.register_condition("pluralPropertyKeyPresent", [](const EvaluationContext& ctx) {
        if (!eval_predefined("deletedPersistentClass", {}, ctx)) return false;
        if (!ctx.config.property_file) return false;
        std::optional<std::string> key = subject_property_key(ctx, true);
        return key && ctx.config.property_file->has_key(*key);
    });

    registry.register_placeholder(
        "ORMFileExcerpt",
        [](const EvaluationContext& ctx, const std::vector<std::string>&)
            -> std::optional<std::string> {
            if (!ctx.config.orm_file) return std::nullopt;
            const ElementRef& subject = ctx.current.subject;
            const OrmEntry* entry = subject.qname.has_attribute()
                                        ? ctx.config.orm_file->find_property(subject.str())
                                        : ctx.config.orm_file->find_class(subject.str());
            if (!entry) return std::nullopt;
            return entry->line_text;
        });
    registry.register_placeholder(
        "migrationStub",
        [](const EvaluationContext& ctx, const std::vector<std::string>&)
            -> std::optional<std::string> {
            switch (ctx.current.kind) {
                case DiffKind::RenamedPackage:
                case DiffKind::RenamedClass:
                case DiffKind::RenamedAttribute:
                    break;
                default:
                    return std::nullopt;
            }
            return "migration { rename \"" + ctx.current.subject.str() + "\" to \"" +
                   ctx.current.new_value.value_or("") + "\" }";
        });
    registry.register_placeholder(
        "sqlIdentifier",
        [](const EvaluationContext& ctx, const std::vector<std::string>&)
            -> std::optional<std::string> {
            return affected_identifier(ctx.current, ctx.old_model, ctx.config.naming,
                                       ctx.config.persistent_stereotype);
        });
    registry.register_placeholder(
        "sqlOccurrences",
        [](const EvaluationContext& ctx, const std::vector<std::string>&)
            -> std::optional<std::string> {
            if (!ctx.config.sources) return std::nullopt;
            std::vector<SqlScanHit> hits =
                scan_hits_for(ctx.current, ctx.old_model, *ctx.config.sources, ctx.config.naming,
                              ctx.config.persistent_stereotype);
            if (hits.empty()) return std::nullopt;
            std::string out;
            for (const SqlScanHit& hit : hits) {
                if (!out.empty()) out += ", ";
                out += hit.path + ":" + std::to_string(hit.line_no);
            }
            return out;
        });
    registry.register_placeholder(
        "propertyFileName",
        [](const EvaluationContext& ctx, const std::vector<std::string>&)
            -> std::optional<std::string> { return ctx.config.property_file_name; });
    registry.register_placeholder(
        "propertyKey",
        [](const EvaluationContext& ctx, const std::vector<std::string>&)
            -> std::optional<std::string> { return subject_property_key(ctx, false); });
    registry.register_placeholder(
        "pluralPropertyKey",
        [](const EvaluationContext& ctx, const std::vector<std::string>&)
            -> std::optional<std::string> { return subject_property_key(ctx, true); });
}

std::vector<ChecklistHint> orm_analysis(const DiffModel& dm,
                                        const std::optional<OrmMappingFile>& orm,
                                        NamingConvention conv,
                                        const std::string& persistent_stereotype) {
    EngineConfig config;
    config.persistent_stereotype = persistent_stereotype;
    config.naming = conv;
    config.orm_file = orm;
    return run_builtin_rule(kOrmRuleName, dm, config);
}

std::vector<ChecklistHint> property_key_analysis(const DiffModel& dm,
                                                 const std::optional<PropertyFile>& properties,
                                                 PropertyKeyStyle style,
                                                 const std::string& persistent_stereotype) {
    EngineConfig config;
    config.persistent_stereotype = persistent_stereotype;
    config.property_key_style = style;
    config.property_file = properties;
    return run_builtin_rule(kPropertyRuleName, dm, config);
}

std::vector<ChecklistHint> xml_migration_analysis(const DiffModel& dm,
                                                  const std::string& persistent_stereotype) {
    EngineConfig config;
    config.persistent_stereotype = persistent_stereotype;
    return run_builtin_rule(kXmlMigrationRuleName, dm, config);
}

}  // namespace cdimpact
