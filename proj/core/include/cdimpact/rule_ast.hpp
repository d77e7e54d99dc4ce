#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cdimpact {

enum class Severity { Minor, Normal, Critical };
enum class Probability { Low, Medium, High };

std::string to_string(Severity s);
std::string to_string(Probability p);
std::optional<Severity> severity_from_string(std::string_view text);
std::optional<Probability> probability_from_string(std::string_view text);

struct ConditionExpr;
using ConditionExprPtr = std::shared_ptr<const ConditionExpr>;

// Immutable boolean condition tree. Or/And have exactly two children (the
// parser builds left-associative chains), Not has one. Calls carry the
// callee name and string arguments; PredefinedCall corresponds to the
// 'pc.' prefix.
struct ConditionExpr {
    enum class Op { Or, And, Not, PredefinedCall, UserCall };

    Op op = Op::UserCall;
    std::vector<ConditionExprPtr> children;
    std::string callee;
    std::vector<std::string> args;

    static ConditionExprPtr make_or(ConditionExprPtr lhs, ConditionExprPtr rhs);
    static ConditionExprPtr make_and(ConditionExprPtr lhs, ConditionExprPtr rhs);
    static ConditionExprPtr make_not(ConditionExprPtr child);
    static ConditionExprPtr make_predefined(std::string name, std::vector<std::string> args = {});
    static ConditionExprPtr make_user(std::string name, std::vector<std::string> args = {});
};

bool equal_condition(const ConditionExpr& a, const ConditionExpr& b);

// Hint text split into literal and placeholder segments. Placeholder names
// are dotted identifiers. In source text, '{name}' is a placeholder and
// literal braces are written '\{' and '\}'.
struct HintSegment {
    enum class Kind { Literal, Placeholder };

    Kind kind = Kind::Literal;
    std::string text;

    bool operator==(const HintSegment&) const = default;
};

struct HintTemplate {
    std::vector<HintSegment> segments;

    bool operator==(const HintTemplate&) const = default;
};

struct ImpactEntry {
    ConditionExprPtr condition;
    HintTemplate hint;
};

bool equal_entry(const ImpactEntry& a, const ImpactEntry& b);

struct ImpactRuleDecl {
    std::string name;
    std::string description;
    std::optional<Severity> severity;
    std::optional<Probability> probability;
    std::optional<std::string> relevant_for;
    std::vector<ImpactEntry> entries;
};

bool equal_rule(const ImpactRuleDecl& a, const ImpactRuleDecl& b);

struct RuleSet {
    std::vector<ImpactRuleDecl> rules;

    const ImpactRuleDecl* find(std::string_view name) const;
    bool empty() const { return rules.empty(); }
};

bool equal_rule_set(const RuleSet& a, const RuleSet& b);

// Declarative extension: either a named condition defined by an expression
// or a placeholder bound to a registered provider.
//   define condition addedActiveClass = pc.addedClass() && pc.elementHasStereotype("active");
//   define placeholder ORMFileExcerpt = orm.excerpt();
struct ExtensionDecl {
    enum class Kind { Condition, Placeholder };

    Kind kind = Kind::Condition;
    std::string name;
    ConditionExprPtr body;       // Condition
    std::string provider;        // Placeholder: dotted provider reference
    std::vector<std::string> provider_args;
};

}  // namespace cdimpact
