#include "cdimpact/rule_text.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "cdimpact/diff.hpp"
#include "cdimpact/engine.hpp"
#include "lexer.hpp"

namespace cdimpact {

// ---- rule AST helpers ----

std::string to_string(Severity s) {
    switch (s) {
        case Severity::Minor: return "minor";
        case Severity::Normal: return "normal";
        case Severity::Critical: return "critical";
    }
    return "?";
}

std::string to_string(Probability p) {
    switch (p) {
        case Probability::Low: return "low";
        case Probability::Medium: return "medium";
        case Probability::High: return "high";
    }
    return "?";
}

std::optional<Severity> severity_from_string(std::string_view text) {
    if (text == "minor") return Severity::Minor;
    if (text == "normal") return Severity::Normal;
    if (text == "critical") return Severity::Critical;
    return std::nullopt;
}

std::optional<Probability> probability_from_string(std::string_view text) {
    if (text == "low") return Probability::Low;
    if (text == "medium") return Probability::Medium;
    if (text == "high") return Probability::High;
    return std::nullopt;
}

ConditionExprPtr ConditionExpr::make_or(ConditionExprPtr lhs, ConditionExprPtr rhs) {
    auto e = std::make_shared<ConditionExpr>();
    e->op = Op::Or;
    e->children = {std::move(lhs), std::move(rhs)};
    return e;
}

ConditionExprPtr ConditionExpr::make_and(ConditionExprPtr lhs, ConditionExprPtr rhs) {
    auto e = std::make_shared<ConditionExpr>();
    e->op = Op::And;
    e->children = {std::move(lhs), std::move(rhs)};
    return e;
}

ConditionExprPtr ConditionExpr::make_not(ConditionExprPtr child) {
    auto e = std::make_shared<ConditionExpr>();
    e->op = Op::Not;
    e->children = {std::move(child)};
    return e;
}

ConditionExprPtr ConditionExpr::make_predefined(std::string name, std::vector<std::string> args) {
    auto e = std::make_shared<ConditionExpr>();
    e->op = Op::PredefinedCall;
    e->callee = std::move(name);
    e->args = std::move(args);
    return e;
}

ConditionExprPtr ConditionExpr::make_user(std::string name, std::vector<std::string> args) {
    auto e = std::make_shared<ConditionExpr>();
    e->op = Op::UserCall;
    e->callee = std::move(name);
    e->args = std::move(args);
    return e;
}

bool equal_condition(const ConditionExpr& a, const ConditionExpr& b) {
    if (a.op != b.op || a.callee != b.callee || a.args != b.args) return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!equal_condition(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

bool equal_entry(const ImpactEntry& a, const ImpactEntry& b) {
    return equal_condition(*a.condition, *b.condition) && a.hint == b.hint;
}

bool equal_rule(const ImpactRuleDecl& a, const ImpactRuleDecl& b) {
    if (a.name != b.name || a.description != b.description || a.severity != b.severity ||
        a.probability != b.probability || a.relevant_for != b.relevant_for)
        return false;
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        if (!equal_entry(a.entries[i], b.entries[i])) return false;
    }
    return true;
}

const ImpactRuleDecl* RuleSet::find(std::string_view name) const {
    for (const ImpactRuleDecl& rule : rules) {
        if (rule.name == name) return &rule;
    }
    return nullptr;
}

bool equal_rule_set(const RuleSet& a, const RuleSet& b) {
    if (a.rules.size() != b.rules.size()) return false;
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        if (!equal_rule(a.rules[i], b.rules[i])) return false;
    }
    return true;
}

// ---- parsing ----

namespace {

using detail::Lexer;
using detail::TokKind;
using detail::Token;

void check_placeholder_name(const std::string& name, const SourceLocation& loc) {
    if (name.empty()) throw ParseError("empty placeholder name", loc);
    std::size_t from = 0;
    while (true) {
        std::size_t dot = name.find('.', from);
        std::string segment =
            dot == std::string::npos ? name.substr(from) : name.substr(from, dot - from);
        if (!is_identifier(segment))
            throw ParseError("invalid placeholder name '{" + name + "}'", loc);
        if (dot == std::string::npos) return;
        from = dot + 1;
    }
}

// Hint templates parse from the escape-preserving raw span so that '\{'
// stays a literal brace while '{' opens a placeholder.
HintTemplate parse_hint_template(const Token& tok) {
    HintTemplate result;
    std::string literal;
    auto flush = [&] {
        if (!literal.empty()) {
            result.segments.push_back({HintSegment::Kind::Literal, literal});
            literal.clear();
        }
    };
    const std::string& raw = tok.raw;
    std::size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '\\') {
            char e = raw[i + 1];  // lexer validated the escape
            literal += e == 'n' ? '\n' : e;
            i += 2;
        } else if (c == '{') {
            std::size_t close = raw.find('}', i + 1);
            if (close == std::string::npos)
                throw ParseError("unterminated placeholder in checklist hint", tok.loc);
            std::string name = raw.substr(i + 1, close - i - 1);
            check_placeholder_name(name, tok.loc);
            flush();
            result.segments.push_back({HintSegment::Kind::Placeholder, name});
            i = close + 1;
        } else if (c == '}') {
            throw ParseError("unescaped '}' in checklist hint; write '\\}'", tok.loc);
        } else {
            literal += c;
            ++i;
        }
    }
    flush();
    return result;
}

class RuleParser {
public:
    explicit RuleParser(std::string_view text) : lx_(text) {}

    RuleSet parse_rules() {
        RuleSet rs;
        while (!lx_.at_end()) {
            Token kw = lx_.expect_keyword("impactRule");
            Token name = lx_.expect_string("rule name");
            if (rs.find(name.text))
                throw ParseError("duplicate rule name '" + name.text + "'", name.loc);
            ImpactRuleDecl rule;
            rule.name = name.text;
            lx_.expect_punct("{");
            bool have_description = false;
            while (!lx_.is_keyword("impact")) {
                Token key = lx_.expect_ident("metadata key or 'impact'");
                lx_.expect_punct("=");
                if (key.text == "description") {
                    if (have_description) throw ParseError("duplicate description", key.loc);
                    have_description = true;
                    rule.description = lx_.expect_string("description text").text;
                } else if (key.text == "severity") {
                    if (rule.severity) throw ParseError("duplicate severity", key.loc);
                    Token value = lx_.expect_ident("severity value");
                    rule.severity = severity_from_string(value.text);
                    if (!rule.severity)
                        throw ParseError("expected one of minor, normal, critical", value.loc);
                } else if (key.text == "probability") {
                    if (rule.probability) throw ParseError("duplicate probability", key.loc);
                    Token value = lx_.expect_ident("probability value");
                    rule.probability = probability_from_string(value.text);
                    if (!rule.probability)
                        throw ParseError("expected one of low, medium, high", value.loc);
                } else if (key.text == "relevantFor") {
                    if (rule.relevant_for) throw ParseError("duplicate relevantFor", key.loc);
                    rule.relevant_for = lx_.expect_string("relevantFor value").text;
                } else {
                    throw ParseError("unknown rule element '" + key.text + "'", key.loc);
                }
            }
            lx_.expect_keyword("impact");
            lx_.expect_punct("{");
            while (!lx_.is_punct("}")) {
                ImpactEntry entry;
                entry.condition = parse_or();
                lx_.expect_punct("=>");
                entry.hint = parse_hint_template(lx_.expect_string("checklist hint"));
                rule.entries.push_back(std::move(entry));
            }
            lx_.expect_punct("}");
            lx_.expect_punct("}");
            if (!have_description)
                throw ParseError("rule '" + rule.name + "' has no description", kw.loc);
            rs.rules.push_back(std::move(rule));
        }
        return rs;
    }

    std::vector<ExtensionDecl> parse_extensions() {
        std::vector<ExtensionDecl> decls;
        std::map<std::string, std::vector<std::string>> refs;  // condition -> user calls
        std::map<std::string, SourceLocation> locs;
        while (!lx_.at_end()) {
            lx_.expect_keyword("define");
            if (lx_.is_keyword("condition")) {
                lx_.next();
                Token name = lx_.expect_ident("condition name");
                if (refs.count(name.text))
                    throw ParseError("duplicate condition definition '" + name.text + "'",
                                     name.loc);
                lx_.expect_punct("=");
                ExtensionDecl decl;
                decl.kind = ExtensionDecl::Kind::Condition;
                decl.name = name.text;
                decl.body = parse_or();
                lx_.expect_punct(";");
                collect_user_calls(*decl.body, refs[name.text]);
                locs[name.text] = name.loc;
                decls.push_back(std::move(decl));
            } else if (lx_.is_keyword("placeholder")) {
                lx_.next();
                Token name = lx_.expect_ident("placeholder name");
                bool duplicate = std::any_of(decls.begin(), decls.end(), [&](const auto& d) {
                    return d.kind == ExtensionDecl::Kind::Placeholder && d.name == name.text;
                });
                if (duplicate)
                    throw ParseError("duplicate placeholder definition '" + name.text + "'",
                                     name.loc);
                lx_.expect_punct("=");
                ExtensionDecl decl;
                decl.kind = ExtensionDecl::Kind::Placeholder;
                decl.name = name.text;
                decl.provider = lx_.expect_ident("provider name").text;
                while (lx_.is_punct(".")) {
                    lx_.next();
                    decl.provider += "." + lx_.expect_ident("provider name segment").text;
                }
                lx_.expect_punct("(");
                // Provider arguments are whitespace-separated string literals.
                while (lx_.peek().kind == TokKind::String)
                    decl.provider_args.push_back(lx_.next().text);
                lx_.expect_punct(")");
                lx_.expect_punct(";");
                decls.push_back(std::move(decl));
            } else {
                lx_.fail("expected 'condition' or 'placeholder'");
            }
        }
        reject_cycles(refs, locs);
        return decls;
    }

private:
    ConditionExprPtr parse_or() {
        ConditionExprPtr lhs = parse_and();
        while (lx_.is_punct("||")) {
            lx_.next();
            lhs = ConditionExpr::make_or(std::move(lhs), parse_and());
        }
        return lhs;
    }

    ConditionExprPtr parse_and() {
        ConditionExprPtr lhs = parse_unary();
        while (lx_.is_punct("&&")) {
            lx_.next();
            lhs = ConditionExpr::make_and(std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ConditionExprPtr parse_unary() {
        if (lx_.is_punct("!")) {
            lx_.next();
            return ConditionExpr::make_not(parse_unary());
        }
        if (lx_.is_punct("(")) {
            lx_.next();
            ConditionExprPtr inner = parse_or();
            lx_.expect_punct(")");
            return inner;
        }
        Token name = lx_.expect_ident("condition name");
        if (name.text == "pc" && lx_.is_punct(".")) {
            lx_.next();
            Token callee = lx_.expect_ident("predefined condition name");
            return ConditionExpr::make_predefined(callee.text, parse_args());
        }
        return ConditionExpr::make_user(name.text, parse_args());
    }

    std::vector<std::string> parse_args() {
        lx_.expect_punct("(");
        std::vector<std::string> args;
        if (!lx_.is_punct(")")) {
            args.push_back(lx_.expect_string("string argument").text);
            while (lx_.is_punct(",")) {
                lx_.next();
                args.push_back(lx_.expect_string("string argument").text);
            }
        }
        lx_.expect_punct(")");
        return args;
    }

    static void collect_user_calls(const ConditionExpr& e, std::vector<std::string>& out) {
        if (e.op == ConditionExpr::Op::UserCall) out.push_back(e.callee);
        for (const ConditionExprPtr& child : e.children) collect_user_calls(*child, out);
    }

    static void reject_cycles(const std::map<std::string, std::vector<std::string>>& refs,
                              const std::map<std::string, SourceLocation>& locs) {
        enum class Color { White, Gray, Black };
        std::map<std::string, Color> color;
        std::function<void(const std::string&)> visit = [&](const std::string& name) {
            color[name] = Color::Gray;
            auto it = refs.find(name);
            if (it != refs.end()) {
                for (const std::string& ref : it->second) {
                    if (!refs.count(ref)) continue;  // not defined in this file
                    if (color[ref] == Color::Gray)
                        throw ParseError("cyclic condition definition '" + ref + "'",
                                         locs.at(ref));
                    if (color[ref] != Color::Black) visit(ref);
                }
            }
            color[name] = Color::Black;
        };
        for (const auto& [name, _] : refs) {
            if (color[name] != Color::Black) visit(name);
        }
    }

    Lexer lx_;
};

// ---- printing ----

std::string quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '{': out += "\\{"; break;
            case '}': out += "\\}"; break;
            default: out += c; break;
        }
    }
    out += '"';
    return out;
}

std::string quote_hint(const HintTemplate& hint) {
    std::string out = "\"";
    for (const HintSegment& segment : hint.segments) {
        if (segment.kind == HintSegment::Kind::Placeholder) {
            out += "{" + segment.text + "}";
            continue;
        }
        for (char c : segment.text) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '{': out += "\\{"; break;
                case '}': out += "\\}"; break;
                default: out += c; break;
            }
        }
    }
    out += '"';
    return out;
}

int precedence(ConditionExpr::Op op) {
    switch (op) {
        case ConditionExpr::Op::Or: return 1;
        case ConditionExpr::Op::And: return 2;
        case ConditionExpr::Op::Not: return 3;
        default: return 4;
    }
}

void print_expr(std::ostream& os, const ConditionExpr& e, int min_prec) {
    int p = precedence(e.op);
    bool parens = p < min_prec;
    if (parens) os << '(';
    switch (e.op) {
        case ConditionExpr::Op::Or:
            print_expr(os, *e.children[0], 1);
            os << " || ";
            print_expr(os, *e.children[1], 2);
            break;
        case ConditionExpr::Op::And:
            print_expr(os, *e.children[0], 2);
            os << " && ";
            print_expr(os, *e.children[1], 3);
            break;
        case ConditionExpr::Op::Not:
            os << '!';
            print_expr(os, *e.children[0], 4);
            break;
        case ConditionExpr::Op::PredefinedCall:
        case ConditionExpr::Op::UserCall: {
            if (e.op == ConditionExpr::Op::PredefinedCall) os << "pc.";
            os << e.callee << '(';
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) os << ", ";
                os << quote(e.args[i]);
            }
            os << ')';
            break;
        }
    }
    if (parens) os << ')';
}

}  // namespace

RuleSet parse_rules(std::string_view text) { return RuleParser(text).parse_rules(); }

std::vector<ExtensionDecl> parse_extensions(std::string_view text) {
    return RuleParser(text).parse_extensions();
}

std::string print_rules(const RuleSet& rs) {
    std::ostringstream os;
    bool first = true;
    for (const ImpactRuleDecl& rule : rs.rules) {
        if (!first) os << '\n';
        first = false;
        os << "impactRule " << quote(rule.name) << " {\n";
        os << "  description = " << quote(rule.description) << '\n';
        if (rule.severity) os << "  severity = " << to_string(*rule.severity) << '\n';
        if (rule.probability) os << "  probability = " << to_string(*rule.probability) << '\n';
        if (rule.relevant_for) os << "  relevantFor = " << quote(*rule.relevant_for) << '\n';
        os << "  impact {\n";
        for (const ImpactEntry& entry : rule.entries) {
            os << "    ";
            print_expr(os, *entry.condition, 0);
            os << " =>\n      " << quote_hint(entry.hint) << '\n';
        }
        os << "  }\n}\n";
    }
    return os.str();
}

std::string print_extensions(const std::vector<ExtensionDecl>& exts) {
    std::ostringstream os;
    for (const ExtensionDecl& decl : exts) {
        if (decl.kind == ExtensionDecl::Kind::Condition) {
            os << "define condition " << decl.name << " = ";
            print_expr(os, *decl.body, 0);
            os << ";\n";
        } else {
            os << "define placeholder " << decl.name << " = " << decl.provider << '(';
            for (std::size_t i = 0; i < decl.provider_args.size(); ++i) {
                if (i) os << ' ';
                os << quote(decl.provider_args[i]);
            }
            os << ");\n";
        }
    }
    return os.str();
}

// ---- validation ----

const std::vector<PredefinedSignature>& predefined_catalog() {
    static const std::vector<PredefinedSignature> catalog = [] {
        std::vector<PredefinedSignature> entries;
        for (int i = 0; i < kDiffKindCount; ++i) {
            std::string name = to_string(static_cast<DiffKind>(i));
            name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
            entries.push_back({std::move(name), 0});
        }
        entries.push_back({"elementHasStereotype", 1});
        entries.push_back({"elementNameMatches", 1});
        entries.push_back({"addedPersistentClass", 0});
        entries.push_back({"deletedPersistentClass", 0});
        entries.push_back({"addedPersistentAttribute", 0});
        entries.push_back({"deletedPersistentAttribute", 0});
        entries.push_back({"renamedPersistentAttribute", 0});
        return entries;
    }();
    return catalog;
}

bool is_predefined_condition(std::string_view name) {
    for (const PredefinedSignature& sig : predefined_catalog()) {
        if (sig.name == name) return true;
    }
    return false;
}

namespace {

void validate_expr(const ConditionExpr& e, const std::string& context,
                   const std::set<std::string>& declared_conditions,
                   const std::set<std::string>& registered_conditions,
                   std::vector<Diagnostic>& diags) {
    switch (e.op) {
        case ConditionExpr::Op::Or:
        case ConditionExpr::Op::And:
        case ConditionExpr::Op::Not:
            for (const ConditionExprPtr& child : e.children)
                validate_expr(*child, context, declared_conditions, registered_conditions, diags);
            return;
        case ConditionExpr::Op::PredefinedCall: {
            const PredefinedSignature* found = nullptr;
            for (const PredefinedSignature& sig : predefined_catalog()) {
                if (sig.name == e.callee) {
                    found = &sig;
                    break;
                }
            }
            if (!found) {
                diags.push_back({DiagnosticSeverity::Error, "UNKNOWN_PREDEFINED",
                                 "unknown predefined condition 'pc." + e.callee + "' " + context});
            } else if (found->arity != static_cast<int>(e.args.size())) {
                diags.push_back(
                    {DiagnosticSeverity::Error, "ARITY_MISMATCH",
                     "'pc." + e.callee + "' expects " + std::to_string(found->arity) +
                         " argument(s), got " + std::to_string(e.args.size()) + " " + context});
            }
            return;
        }
        case ConditionExpr::Op::UserCall:
            if (!e.args.empty()) {
                diags.push_back({DiagnosticSeverity::Error, "ARITY_MISMATCH",
                                 "user condition '" + e.callee + "' takes no arguments " +
                                     context});
            }
            if (!declared_conditions.count(e.callee) && !registered_conditions.count(e.callee)) {
                diags.push_back({DiagnosticSeverity::Warning, "UNRESOLVED_CONDITION",
                                 "condition '" + e.callee +
                                     "' resolves to no extension or registered name " + context});
            }
            return;
    }
}

}  // namespace

std::vector<Diagnostic> validate(const RuleSet& rs, const std::vector<ExtensionDecl>& exts,
                                 const std::set<std::string>& registered_conditions,
                                 const std::set<std::string>& registered_placeholders) {
    std::vector<Diagnostic> diags;
    std::set<std::string> declared_conditions;
    std::set<std::string> declared_placeholders;
    for (const ExtensionDecl& decl : exts) {
        if (decl.kind == ExtensionDecl::Kind::Condition)
            declared_conditions.insert(decl.name);
        else
            declared_placeholders.insert(decl.name);
    }
    std::set<std::string> known_placeholders = registered_placeholders;
    for (const std::string& name : builtin_placeholder_names()) known_placeholders.insert(name);

    for (const ImpactRuleDecl& rule : rs.rules) {
        const std::string context = "in rule '" + rule.name + "'";
        for (const ImpactEntry& entry : rule.entries) {
            validate_expr(*entry.condition, context, declared_conditions, registered_conditions,
                          diags);
            for (const HintSegment& segment : entry.hint.segments) {
                if (segment.kind != HintSegment::Kind::Placeholder) continue;
                if (declared_placeholders.count(segment.text) ||
                    known_placeholders.count(segment.text))
                    continue;
                diags.push_back({DiagnosticSeverity::Warning, "UNRESOLVED_PLACEHOLDER",
                                 "placeholder '{" + segment.text +
                                     "}' resolves to no extension, registered name or builtin " +
                                     context});
            }
        }
    }
    for (const ExtensionDecl& decl : exts) {
        if (decl.kind == ExtensionDecl::Kind::Condition) {
            validate_expr(*decl.body, "in condition '" + decl.name + "'", declared_conditions,
                          registered_conditions, diags);
        } else if (!known_placeholders.count(decl.provider)) {
            diags.push_back({DiagnosticSeverity::Error, "UNKNOWN_PROVIDER",
                             "placeholder '" + decl.name + "' names unknown provider '" +
                                 decl.provider + "'"});
        }
    }
    return diags;
}

}  // namespace cdimpact
