#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdimpact/diff.hpp"
#include "cdimpact/rule_ast.hpp"

namespace cdimpact {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// What to do when a user condition or placeholder has no definition:
// Fail raises EvalError, False treats conditions as false, Flag keeps the
// hint and marks it unresolved (placeholders render "{name:unresolved}").
enum class UnresolvedPolicy { Fail, False, Flag };

enum class NamingConvention { UpperSnake, AsIs, LowerSnake };
enum class PropertyKeyStyle { Upper, UpperSnake, AsIs };

std::string to_string(NamingConvention c);

// Parsed object-relational mapping file; see parse_orm_file in builtin.hpp.
struct OrmEntry {
    enum class Kind { ClassMap, PropertyMap };

    Kind kind = Kind::ClassMap;
    std::string model_ref;  // "a.b.C" or "a.b.C#attr"
    std::string db_name;
    std::string line_text;  // verbatim source line
    int line_no = 0;
};

struct OrmMappingFile {
    std::vector<OrmEntry> entries;

    const OrmEntry* find_class(const std::string& qname) const;
    const OrmEntry* find_property(const std::string& ref) const;
};

struct PropertyFile {
    std::vector<std::pair<std::string, std::string>> entries;  // insertion order

    bool has_key(const std::string& key) const;
};

struct ScannedFile {
    std::string path;
    std::vector<std::string> lines;
};

struct ScanIndex {
    std::vector<ScannedFile> files;  // sorted by path
};

// Everything the predefined conditions and builtin providers may consult.
struct EngineConfig {
    std::string persistent_stereotype = "persistent";
    NamingConvention naming = NamingConvention::UpperSnake;
    PropertyKeyStyle property_key_style = PropertyKeyStyle::Upper;
    std::string property_file_name = "core.properties";
    std::optional<OrmMappingFile> orm_file;
    std::optional<PropertyFile> property_file;
    std::optional<ScanIndex> sources;
};

struct EvaluationContext {
    const ModelDifference& current;
    const DiffModel& diff;
    const Model& old_model;
    const Model& new_model;
    const EngineConfig& config;
};

// Resolves the subject element of the current difference in the model it
// lives in (new model for additions, old model otherwise).
std::optional<ResolvedElement> resolve_subject(const EvaluationContext& ctx);

using ConditionFn = std::function<bool(const EvaluationContext&)>;
using PlaceholderFn = std::function<std::optional<std::string>(
    const EvaluationContext&, const std::vector<std::string>& args)>;

// Named condition and placeholder providers plus declarative extensions.
// Code-registered names win over declarative ones of the same name.
class ExtensionRegistry {
public:
    void register_condition(std::string name, ConditionFn fn);
    void register_placeholder(std::string name, PlaceholderFn fn);
    void add_extensions(const std::vector<ExtensionDecl>& decls);

    const ConditionFn* find_condition(const std::string& name) const;
    const PlaceholderFn* find_placeholder(const std::string& name) const;
    const ExtensionDecl* find_declarative_condition(const std::string& name) const;
    const ExtensionDecl* find_declarative_placeholder(const std::string& name) const;

    std::set<std::string> condition_names() const;
    std::set<std::string> placeholder_names() const;  // includes built-ins

private:
    std::map<std::string, ConditionFn> conditions_;
    std::map<std::string, PlaceholderFn> placeholders_;
    std::map<std::string, ExtensionDecl> decl_conditions_;
    std::map<std::string, ExtensionDecl> decl_placeholders_;
};

// Placeholder names every template can use without registration.
const std::set<std::string>& builtin_placeholder_names();

// Evaluates one predefined condition against the current difference.
// Throws EvalError for unknown names or argument-count mismatches.
bool eval_predefined(const std::string& name, const std::vector<std::string>& args,
                     const EvaluationContext& ctx);

enum class TriBool { False, True, Unresolved };

// Short-circuit left-to-right evaluation. Unresolved user calls follow the
// policy; under Flag they propagate as TriBool::Unresolved (Kleene logic).
TriBool evaluate_condition(const ConditionExpr& expr, const EvaluationContext& ctx,
                           const ExtensionRegistry& registry, UnresolvedPolicy policy);

struct ExpandedText {
    std::string text;
    bool unresolved = false;
};

// Expands placeholders via declarative bindings, registered providers, and
// the built-ins (element.name, element.qualifiedName, change.description,
// oldName, newName).
ExpandedText expand_template(const HintTemplate& tmpl, const EvaluationContext& ctx,
                             const ExtensionRegistry& registry, UnresolvedPolicy policy);

struct ChecklistHint {
    std::string rule_name;
    std::string text;
    ModelDifference causing;
    std::optional<Severity> severity;
    std::optional<Probability> probability;
    std::optional<std::string> relevant_for;
    bool unresolved = false;

    bool operator==(const ChecklistHint&) const = default;
};

// Evaluates one rule against every difference (canonical order): one hint
// per impact entry whose condition holds, hint metadata copied from the
// rule.
std::vector<ChecklistHint> evaluate_rule(const ImpactRuleDecl& rule, const DiffModel& dm,
                                         const ExtensionRegistry& registry,
                                         const EngineConfig& config,
                                         UnresolvedPolicy policy = UnresolvedPolicy::Flag);

struct HintFilter {
    std::optional<std::string> relevant_for;   // keep hints tagged with this value
    std::optional<Severity> min_severity;      // absent hint severity counts as Normal
};

bool hint_passes_filter(const ChecklistHint& hint, const HintFilter& filter);

// Evaluates all rules in RuleSet order and concatenates their hints, then
// applies the filter. Deterministic: equal inputs produce equal output.
std::vector<ChecklistHint> evaluate_all(const RuleSet& rs, const DiffModel& dm,
                                        const ExtensionRegistry& registry,
                                        const EngineConfig& config,
                                        UnresolvedPolicy policy = UnresolvedPolicy::Flag,
                                        const HintFilter& filter = {});

}  // namespace cdimpact
