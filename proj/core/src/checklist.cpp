#include "cdimpact/checklist.hpp"

#include <map>
#include <sstream>

#include "json.hpp"

namespace cdimpact {

namespace {

using ordered_json = nlohmann::ordered_json;

nlohmann::json opt_str(const std::optional<std::string>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json opt_ref(const std::optional<ElementRef>& v) {
    return v ? nlohmann::json(v->str()) : nlohmann::json(nullptr);
}

std::optional<RefKind> ref_kind_from_string(const std::string& text) {
    for (RefKind k : {RefKind::Package, RefKind::Class, RefKind::Attribute, RefKind::Association})
        if (to_string(k) == text) return k;
    return std::nullopt;
}

std::optional<ChangeFacet> facet_from_string(const std::string& text) {
    for (ChangeFacet f :
         {ChangeFacet::None, ChangeFacet::Superclass, ChangeFacet::Type, ChangeFacet::Cardinality,
          ChangeFacet::Stereotype, ChangeFacet::Source, ChangeFacet::Target,
          ChangeFacet::SourceCardinality, ChangeFacet::TargetCardinality, ChangeFacet::Name})
        if (to_string(f) == text) return f;
    return std::nullopt;
}

ElementRef parse_ref(RefKind kind, const std::string& text) {
    ElementRef ref;
    ref.kind = kind;
    if (kind == RefKind::Association) {
        ref.qname.segments.push_back(text);
    } else {
        ref.qname = QualifiedName::parse(text);
    }
    return ref;
}

std::optional<std::string> json_opt_str(const nlohmann::json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<std::string>();
}

[[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, {1, 1});
}

ModelDifference parse_causing(const nlohmann::json& j) {
    ModelDifference d;
    std::optional<DiffKind> kind = diff_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) fail("unknown difference kind '" + j.at("kind").get<std::string>() + "'");
    d.kind = *kind;
    std::optional<RefKind> subject_kind =
        ref_kind_from_string(j.at("subjectKind").get<std::string>());
    if (!subject_kind)
        fail("unknown element kind '" + j.at("subjectKind").get<std::string>() + "'");
    d.subject = parse_ref(*subject_kind, j.at("subject").get<std::string>());
    std::optional<ChangeFacet> facet = facet_from_string(j.at("facet").get<std::string>());
    if (!facet) fail("unknown change facet '" + j.at("facet").get<std::string>() + "'");
    d.facet = *facet;
    d.old_value = json_opt_str(j.at("old"));
    d.new_value = json_opt_str(j.at("new"));
    if (!j.at("counterpart").is_null()) {
        std::optional<RefKind> ck = ref_kind_from_string(j.at("counterpartKind").get<std::string>());
        if (!ck) fail("unknown element kind '" + j.at("counterpartKind").get<std::string>() + "'");
        d.counterpart = parse_ref(*ck, j.at("counterpart").get<std::string>());
    }
    return d;
}

}  // namespace

Checklist build_checklist(const RuleSet& rs, const std::vector<ChecklistHint>& hints) {
    Checklist cl;
    for (const ImpactRuleDecl& rule : rs.rules) {
        ChecklistSection section;
        section.rule_name = rule.name;
        section.description = rule.description;
        section.severity = rule.severity;
        section.probability = rule.probability;
        section.relevant_for = rule.relevant_for;
        for (const ChecklistHint& hint : hints)
            if (hint.rule_name == rule.name) section.hints.push_back(hint);
        if (!section.hints.empty()) cl.sections.push_back(std::move(section));
    }
    return cl;
}

std::string render_text(const Checklist& cl, ChecklistMode mode) {
    std::ostringstream out;
    bool first = true;
    for (const ChecklistSection& section : cl.sections) {
        if (!first) out << "\n";
        first = false;
        out << section.rule_name << ":\n=====\n";
        if (mode == ChecklistMode::Detailed) {
            out << "Description: " << section.description << "\n";
            out << "Severity: " << (section.severity ? to_string(*section.severity) : "normal")
                << "\n";
            out << "Probability: "
                << (section.probability ? to_string(*section.probability) : "unspecified") << "\n";
            out << "Relevant for: " << section.relevant_for.value_or("all") << "\n";
        }
        for (const ChecklistHint& hint : section.hints) {
            out << "- " << hint.text
                << " (Causing model change: " << describe_difference(hint.causing) << ")\n";
            if (mode == ChecklistMode::Detailed && hint.unresolved) out << "  [unresolved]\n";
        }
    }
    return out.str();
}

std::string render_structured(const Checklist& cl) {
    ordered_json root;
    root["sections"] = ordered_json::array();
    for (const ChecklistSection& section : cl.sections) {
        ordered_json s;
        s["rule"] = section.rule_name;
        s["description"] = section.description;
        s["severity"] = section.severity ? nlohmann::json(to_string(*section.severity))
                                         : nlohmann::json(nullptr);
        s["probability"] = section.probability ? nlohmann::json(to_string(*section.probability))
                                               : nlohmann::json(nullptr);
        s["relevantFor"] = opt_str(section.relevant_for);
        s["hints"] = ordered_json::array();
        for (const ChecklistHint& hint : section.hints) {
            ordered_json h;
            h["text"] = hint.text;
            h["unresolved"] = hint.unresolved;
            ordered_json c;
            c["kind"] = to_string(hint.causing.kind);
            c["subject"] = hint.causing.subject.str();
            c["subjectKind"] = to_string(hint.causing.subject.kind);
            c["facet"] = to_string(hint.causing.facet);
            c["old"] = opt_str(hint.causing.old_value);
            c["new"] = opt_str(hint.causing.new_value);
            c["counterpart"] = opt_ref(hint.causing.counterpart);
            c["counterpartKind"] = hint.causing.counterpart
                                       ? nlohmann::json(to_string(hint.causing.counterpart->kind))
                                       : nlohmann::json(nullptr);
            c["description"] = describe_difference(hint.causing);
            h["causing"] = std::move(c);
            s["hints"].push_back(std::move(h));
        }
        root["sections"].push_back(std::move(s));
    }
    return root.dump(2) + "\n";
}

Checklist parse_structured(std::string_view json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(e.what());
    }
    Checklist cl;
    try {
        for (const nlohmann::json& s : root.at("sections")) {
            ChecklistSection section;
            section.rule_name = s.at("rule").get<std::string>();
            section.description = s.at("description").get<std::string>();
            if (std::optional<std::string> sev = json_opt_str(s.at("severity"))) {
                section.severity = severity_from_string(*sev);
                if (!section.severity) fail("unknown severity '" + *sev + "'");
            }
            if (std::optional<std::string> prob = json_opt_str(s.at("probability"))) {
                section.probability = probability_from_string(*prob);
                if (!section.probability) fail("unknown probability '" + *prob + "'");
            }
            section.relevant_for = json_opt_str(s.at("relevantFor"));
            for (const nlohmann::json& h : s.at("hints")) {
                ChecklistHint hint;
                hint.rule_name = section.rule_name;
                hint.text = h.at("text").get<std::string>();
                hint.unresolved = h.at("unresolved").get<bool>();
                hint.causing = parse_causing(h.at("causing"));
                hint.severity = section.severity;
                hint.probability = section.probability;
                hint.relevant_for = section.relevant_for;
                section.hints.push_back(std::move(hint));
            }
            if (section.hints.empty()) fail("section '" + section.rule_name + "' has no hints");
            cl.sections.push_back(std::move(section));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(e.what());
    }
    return cl;
}

}  // namespace cdimpact
