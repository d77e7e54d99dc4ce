#include "cdimpact/engine.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <variant>

namespace cdimpact {

std::string to_string(NamingConvention c) {
    switch (c) {
        case NamingConvention::UpperSnake: return "upper_snake";
        case NamingConvention::AsIs: return "as_is";
        case NamingConvention::LowerSnake: return "lower_snake";
    }
    return "?";
}

const OrmEntry* OrmMappingFile::find_class(const std::string& qname) const {
    for (const OrmEntry& e : entries) {
        if (e.kind == OrmEntry::Kind::ClassMap && e.model_ref == qname) return &e;
    }
    return nullptr;
}

const OrmEntry* OrmMappingFile::find_property(const std::string& ref) const {
    for (const OrmEntry& e : entries) {
        if (e.kind == OrmEntry::Kind::PropertyMap && e.model_ref == ref) return &e;
    }
    return nullptr;
}

bool PropertyFile::has_key(const std::string& key) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const auto& entry) { return entry.first == key; });
}

std::optional<ResolvedElement> resolve_subject(const EvaluationContext& ctx) {
    switch (ctx.current.kind) {
        case DiffKind::AddedPackage:
        case DiffKind::AddedClass:
        case DiffKind::AddedAttribute:
        case DiffKind::AddedAssociation:
        case DiffKind::AddedStereotype:
            return resolve_ref(ctx.new_model, ctx.current.subject);
        default:
            return resolve_ref(ctx.old_model, ctx.current.subject);
    }
}

void ExtensionRegistry::register_condition(std::string name, ConditionFn fn) {
    conditions_[std::move(name)] = std::move(fn);
}

void ExtensionRegistry::register_placeholder(std::string name, PlaceholderFn fn) {
    placeholders_[std::move(name)] = std::move(fn);
}

void ExtensionRegistry::add_extensions(const std::vector<ExtensionDecl>& decls) {
    for (const ExtensionDecl& decl : decls) {
        auto& target = decl.kind == ExtensionDecl::Kind::Condition ? decl_conditions_
                                                                   : decl_placeholders_;
        if (!target.emplace(decl.name, decl).second) {
            const char* what =
                decl.kind == ExtensionDecl::Kind::Condition ? "condition" : "placeholder";
            throw EvalError(std::string("duplicate declarative ") + what + " '" + decl.name +
                            "'");
        }
    }
}

const ConditionFn* ExtensionRegistry::find_condition(const std::string& name) const {
    auto it = conditions_.find(name);
    return it == conditions_.end() ? nullptr : &it->second;
}

const PlaceholderFn* ExtensionRegistry::find_placeholder(const std::string& name) const {
    auto it = placeholders_.find(name);
    return it == placeholders_.end() ? nullptr : &it->second;
}

const ExtensionDecl* ExtensionRegistry::find_declarative_condition(const std::string& name) const {
    auto it = decl_conditions_.find(name);
    return it == decl_conditions_.end() ? nullptr : &it->second;
}

const ExtensionDecl* ExtensionRegistry::find_declarative_placeholder(
    const std::string& name) const {
    auto it = decl_placeholders_.find(name);
    return it == decl_placeholders_.end() ? nullptr : &it->second;
}

std::set<std::string> ExtensionRegistry::condition_names() const {
    std::set<std::string> names;
    for (const auto& [name, _] : conditions_) names.insert(name);
    for (const auto& [name, _] : decl_conditions_) names.insert(name);
    return names;
}

std::set<std::string> ExtensionRegistry::placeholder_names() const {
    std::set<std::string> names = builtin_placeholder_names();
    for (const auto& [name, _] : placeholders_) names.insert(name);
    for (const auto& [name, _] : decl_placeholders_) names.insert(name);
    return names;
}

const std::set<std::string>& builtin_placeholder_names() {
    static const std::set<std::string> names = {
        "element.name", "element.qualifiedName", "change.description", "oldName", "newName",
    };
    return names;
}

namespace {

const std::map<std::string, DiffKind>& kind_conditions() {
    static const std::map<std::string, DiffKind> table = [] {
        std::map<std::string, DiffKind> t;
        for (int i = 0; i < kDiffKindCount; ++i) {
            auto kind = static_cast<DiffKind>(i);
            std::string name = to_string(kind);
            name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
            t.emplace(std::move(name), kind);
        }
        return t;
    }();
    return table;
}

bool subject_has_stereotype(const EvaluationContext& ctx, const std::string& stereotype) {
    std::optional<ResolvedElement> element = resolve_subject(ctx);
    if (!element) return false;
    if (const ClassDecl* const* cls = std::get_if<const ClassDecl*>(&*element))
        return (*cls)->has_stereotype(stereotype);
    if (const Attribute* const* attr = std::get_if<const Attribute*>(&*element))
        return (*attr)->has_stereotype(stereotype);
    return false;
}

bool subject_is_persistent(const EvaluationContext& ctx) {
    return subject_has_stereotype(ctx, ctx.config.persistent_stereotype);
}

std::optional<std::string> eval_builtin_placeholder(const std::string& name,
                                                    const EvaluationContext& ctx, bool& known) {
    known = true;
    if (name == "element.name") return ctx.current.subject.qname.simple_name();
    if (name == "element.qualifiedName") return ctx.current.subject.str();
    if (name == "change.description") return describe_difference(ctx.current);
    if (name == "oldName") return ctx.current.old_value;
    if (name == "newName") return ctx.current.new_value;
    known = false;
    return std::nullopt;
}

TriBool eval_expr(const ConditionExpr& e, const EvaluationContext& ctx,
                  const ExtensionRegistry& registry, UnresolvedPolicy policy,
                  std::vector<std::string>& visiting) {
    using Op = ConditionExpr::Op;
    switch (e.op) {
        case Op::And: {
            TriBool lhs = eval_expr(*e.children[0], ctx, registry, policy, visiting);
            if (lhs == TriBool::False) return TriBool::False;
            TriBool rhs = eval_expr(*e.children[1], ctx, registry, policy, visiting);
            if (rhs == TriBool::False) return TriBool::False;
            if (lhs == TriBool::Unresolved || rhs == TriBool::Unresolved)
                return TriBool::Unresolved;
            return TriBool::True;
        }
        case Op::Or: {
            TriBool lhs = eval_expr(*e.children[0], ctx, registry, policy, visiting);
            if (lhs == TriBool::True) return TriBool::True;
            TriBool rhs = eval_expr(*e.children[1], ctx, registry, policy, visiting);
            if (rhs == TriBool::True) return TriBool::True;
            if (lhs == TriBool::Unresolved || rhs == TriBool::Unresolved)
                return TriBool::Unresolved;
            return TriBool::False;
        }
        case Op::Not: {
            TriBool value = eval_expr(*e.children[0], ctx, registry, policy, visiting);
            if (value == TriBool::Unresolved) return TriBool::Unresolved;
            return value == TriBool::True ? TriBool::False : TriBool::True;
        }
        case Op::PredefinedCall:
            return eval_predefined(e.callee, e.args, ctx) ? TriBool::True : TriBool::False;
        case Op::UserCall: {
            if (!e.args.empty())
                throw EvalError("user condition '" + e.callee + "' takes no arguments");
            if (const ConditionFn* fn = registry.find_condition(e.callee))
                return (*fn)(ctx) ? TriBool::True : TriBool::False;
            if (const ExtensionDecl* decl = registry.find_declarative_condition(e.callee)) {
                if (std::find(visiting.begin(), visiting.end(), e.callee) != visiting.end())
                    throw EvalError("cyclic condition definition '" + e.callee + "'");
                visiting.push_back(e.callee);
                TriBool result = eval_expr(*decl->body, ctx, registry, policy, visiting);
                visiting.pop_back();
                return result;
            }
            switch (policy) {
                case UnresolvedPolicy::Fail:
                    throw EvalError("unresolved condition '" + e.callee + "'");
                case UnresolvedPolicy::False:
                    return TriBool::False;
                case UnresolvedPolicy::Flag:
                    return TriBool::Unresolved;
            }
            return TriBool::False;
        }
    }
    return TriBool::False;
}

}  // namespace

bool eval_predefined(const std::string& name, const std::vector<std::string>& args,
                     const EvaluationContext& ctx) {
    auto require_arity = [&](std::size_t n) {
        if (args.size() != n) {
            throw EvalError("'pc." + name + "' expects " + std::to_string(n) +
                            " argument(s), got " + std::to_string(args.size()));
        }
    };
    auto kind_it = kind_conditions().find(name);
    if (kind_it != kind_conditions().end()) {
        require_arity(0);
        return ctx.current.kind == kind_it->second;
    }
    if (name == "elementHasStereotype") {
        require_arity(1);
        return subject_has_stereotype(ctx, args[0]);
    }
    if (name == "elementNameMatches") {
        require_arity(1);
        std::regex re;
        try {
            re = std::regex(args[0]);
        } catch (const std::regex_error&) {
            throw EvalError("invalid regular expression '" + args[0] + "'");
        }
        return std::regex_match(ctx.current.subject.qname.simple_name(), re);
    }
    if (name == "addedPersistentClass") {
        require_arity(0);
        return ctx.current.kind == DiffKind::AddedClass && subject_is_persistent(ctx);
    }
    if (name == "deletedPersistentClass") {
        require_arity(0);
        return ctx.current.kind == DiffKind::DeletedClass && subject_is_persistent(ctx);
    }
    if (name == "addedPersistentAttribute") {
        require_arity(0);
        return ctx.current.kind == DiffKind::AddedAttribute && subject_is_persistent(ctx);
    }
    if (name == "deletedPersistentAttribute") {
        require_arity(0);
        return ctx.current.kind == DiffKind::DeletedAttribute && subject_is_persistent(ctx);
    }
    if (name == "renamedPersistentAttribute") {
        require_arity(0);
        return ctx.current.kind == DiffKind::RenamedAttribute && subject_is_persistent(ctx);
    }
    throw EvalError("unknown predefined condition 'pc." + name + "'");
}

TriBool evaluate_condition(const ConditionExpr& expr, const EvaluationContext& ctx,
                           const ExtensionRegistry& registry, UnresolvedPolicy policy) {
    std::vector<std::string> visiting;
    return eval_expr(expr, ctx, registry, policy, visiting);
}

ExpandedText expand_template(const HintTemplate& tmpl, const EvaluationContext& ctx,
                             const ExtensionRegistry& registry, UnresolvedPolicy policy) {
    ExpandedText out;
    for (const HintSegment& segment : tmpl.segments) {
        if (segment.kind == HintSegment::Kind::Literal) {
            out.text += segment.text;
            continue;
        }
        const std::string& name = segment.text;
        std::optional<std::string> value;
        bool resolved = false;
        if (const PlaceholderFn* fn = registry.find_placeholder(name)) {
            value = (*fn)(ctx, {});
            resolved = true;
        } else if (const ExtensionDecl* decl = registry.find_declarative_placeholder(name)) {
            if (const PlaceholderFn* provider = registry.find_placeholder(decl->provider)) {
                value = (*provider)(ctx, decl->provider_args);
                resolved = true;
            } else {
                bool known = false;
                value = eval_builtin_placeholder(decl->provider, ctx, known);
                resolved = known;
            }
        } else {
            value = eval_builtin_placeholder(name, ctx, resolved);
        }
        if (resolved && value) {
            out.text += *value;
            continue;
        }
        if (policy == UnresolvedPolicy::Fail)
            throw EvalError("unresolved placeholder '" + name + "'");
        out.text += "{" + name + ":unresolved}";
        out.unresolved = true;
    }
    return out;
}

std::vector<ChecklistHint> evaluate_rule(const ImpactRuleDecl& rule, const DiffModel& dm,
                                         const ExtensionRegistry& registry,
                                         const EngineConfig& config, UnresolvedPolicy policy) {
    std::vector<ChecklistHint> hints;
    for (const ModelDifference& d : dm.entries()) {
        EvaluationContext ctx{d, dm, dm.old_model(), dm.new_model(), config};
        for (const ImpactEntry& entry : rule.entries) {
            TriBool cond = evaluate_condition(*entry.condition, ctx, registry, policy);
            if (cond == TriBool::False) continue;
            ExpandedText expanded = expand_template(entry.hint, ctx, registry, policy);
            ChecklistHint hint;
            hint.rule_name = rule.name;
            hint.text = std::move(expanded.text);
            hint.causing = d;
            hint.severity = rule.severity;
            hint.probability = rule.probability;
            hint.relevant_for = rule.relevant_for;
            hint.unresolved = cond == TriBool::Unresolved || expanded.unresolved;
            hints.push_back(std::move(hint));
        }
    }
    return hints;
}

bool hint_passes_filter(const ChecklistHint& hint, const HintFilter& filter) {
    if (filter.relevant_for) {
        if (!hint.relevant_for) return false;
        bool tagged = false;
        const std::string& tags = *hint.relevant_for;
        std::size_t from = 0;
        while (from <= tags.size()) {
            std::size_t comma = tags.find(',', from);
            std::string tag = comma == std::string::npos ? tags.substr(from)
                                                         : tags.substr(from, comma - from);
            std::size_t begin = tag.find_first_not_of(" \t");
            std::size_t end = tag.find_last_not_of(" \t");
            if (begin != std::string::npos && tag.substr(begin, end - begin + 1) == *filter.relevant_for) {
                tagged = true;
                break;
            }
            if (comma == std::string::npos) break;
            from = comma + 1;
        }
        if (!tagged) return false;
    }
    if (filter.min_severity) {
        Severity severity = hint.severity.value_or(Severity::Normal);
        if (static_cast<int>(severity) < static_cast<int>(*filter.min_severity)) return false;
    }
    return true;
}

std::vector<ChecklistHint> evaluate_all(const RuleSet& rs, const DiffModel& dm,
                                        const ExtensionRegistry& registry,
                                        const EngineConfig& config, UnresolvedPolicy policy,
                                        const HintFilter& filter) {
    std::vector<ChecklistHint> all;
    for (const ImpactRuleDecl& rule : rs.rules) {
        for (ChecklistHint& hint : evaluate_rule(rule, dm, registry, config, policy)) {
            if (hint_passes_filter(hint, filter)) all.push_back(std::move(hint));
        }
    }
    return all;
}

}  // namespace cdimpact
