#include "cdimpact/matching.hpp"

#include <algorithm>
#include <tuple>

#include "cdimpact/similarity.hpp"

namespace cdimpact {

namespace {

std::string join_container(const std::string& container, const std::string& simple) {
    return container.empty() ? simple : container + "." + simple;
}

ElementRef make_ref(RefKind kind, const std::string& qname) {
    return ElementRef{kind, QualifiedName::parse(qname)};
}

ElementRef attr_ref(const std::string& class_qname, const std::string& attr) {
    return make_ref(RefKind::Attribute, class_qname + "#" + attr);
}

ElementRef assoc_ref(const std::string& name) {
    ElementRef ref;
    ref.kind = RefKind::Association;
    ref.qname.segments = {name};
    return ref;
}

struct Candidate {
    double score = 0.0;
    std::string old_name;
    std::string new_name;
};

// Deterministic greedy order: best score first, ties by old then new name.
bool candidate_less(const Candidate& a, const Candidate& b) {
    return std::tie(b.score, a.old_name, a.new_name) < std::tie(a.score, b.old_name, b.new_name);
}

void apply_preset(Matching& m, const Model& old_model, const Model& new_model,
                  const Presetting& p) {
    const std::string subject = p.subject.str();
    const std::string context =
        std::string("presetting ") +
        (p.instruction == PresetInstruction::Renamed ? "renamed" : "moved") + " \"" + subject +
        "\" to \"" + p.target + "\"";

    if (p.subject.kind == RefKind::Attribute) {
        const std::string class_qname = p.subject.qname.container().str();
        const std::string attr = *p.subject.qname.attribute;
        if (!old_model.find_attribute(class_qname, attr))
            throw MatchError(context + ": no attribute '" + subject + "' in the old model");
        // Moved targets name the new model's container as written; renames
        // stay in the (possibly remapped) container.
        const std::string new_class =
            p.instruction == PresetInstruction::Moved ? p.target : m.map_class(class_qname);
        const std::string new_attr = p.instruction == PresetInstruction::Renamed ? p.target : attr;
        if (!new_model.find_attribute(new_class, new_attr))
            throw MatchError(context + ": no attribute '" + new_class + "#" + new_attr +
                             "' in the new model");
        m.add({p.subject, attr_ref(new_class, new_attr), MatchProvenance::Preset, 1.0});
        return;
    }

    const bool is_class = old_model.find_class(subject) != nullptr;
    const bool is_package = old_model.find_package(subject) != nullptr;
    if (p.instruction == PresetInstruction::Renamed) {
        if (is_class) {
            const ClassEntry* entry = old_model.find_class_entry(subject);
            const std::string expected =
                join_container(m.map_package(entry->container), p.target);
            if (!new_model.find_class(expected))
                throw MatchError(context + ": no class '" + expected + "' in the new model");
            m.add({make_ref(RefKind::Class, subject), make_ref(RefKind::Class, expected),
                   MatchProvenance::Preset, 1.0});
        } else if (is_package) {
            const std::string container = p.subject.qname.container().str();
            const std::string expected =
                join_container(container.empty() ? "" : m.map_package(container), p.target);
            if (!new_model.find_package(expected))
                throw MatchError(context + ": no package '" + expected + "' in the new model");
            m.add({make_ref(RefKind::Package, subject), make_ref(RefKind::Package, expected),
                   MatchProvenance::Preset, 1.0});
        } else {
            throw MatchError(context + ": no class or package '" + subject +
                             "' in the old model");
        }
    } else {
        if (is_class) {
            const std::string simple = p.subject.qname.simple_name();
            const std::string expected = p.target + "." + simple;
            if (!new_model.find_class(expected))
                throw MatchError(context + ": no class '" + expected + "' in the new model");
            m.add({make_ref(RefKind::Class, subject), make_ref(RefKind::Class, expected),
                   MatchProvenance::Preset, 1.0});
        } else if (is_package) {
            throw MatchError(context + ": packages cannot be moved");
        } else {
            throw MatchError(context + ": no class '" + subject + "' in the old model");
        }
    }
}

}  // namespace

std::string to_string(MatchProvenance p) {
    switch (p) {
        case MatchProvenance::Preset: return "preset";
        case MatchProvenance::Exact: return "exact";
        case MatchProvenance::Similarity: return "similarity";
    }
    return "?";
}

std::string Matching::key(const ElementRef& ref) {
    return to_string(ref.kind) + ":" + ref.qname.str();
}

void Matching::add(MatchPair pair) {
    if (pair.old_ref.kind != pair.new_ref.kind)
        throw MatchError("cannot match '" + pair.old_ref.str() + "' to '" + pair.new_ref.str() +
                         "': element kinds differ");
    const std::string old_key = key(pair.old_ref);
    const std::string new_key = key(pair.new_ref);
    if (by_old_.count(old_key))
        throw MatchError("old element '" + pair.old_ref.str() + "' is already matched");
    if (by_new_.count(new_key))
        throw MatchError("new element '" + pair.new_ref.str() + "' is already matched");
    if (pair.old_ref.kind == RefKind::Class)
        class_map_[pair.old_ref.str()] = pair.new_ref.str();
    else if (pair.old_ref.kind == RefKind::Package)
        package_map_[pair.old_ref.str()] = pair.new_ref.str();
    by_old_[old_key] = pairs_.size();
    by_new_[new_key] = pairs_.size();
    pairs_.push_back(std::move(pair));
}

const MatchPair* Matching::find_by_old(const ElementRef& ref) const {
    auto it = by_old_.find(key(ref));
    return it == by_old_.end() ? nullptr : &pairs_[it->second];
}

const MatchPair* Matching::find_by_new(const ElementRef& ref) const {
    auto it = by_new_.find(key(ref));
    return it == by_new_.end() ? nullptr : &pairs_[it->second];
}

std::string Matching::map_class(const std::string& old_qname) const {
    auto it = class_map_.find(old_qname);
    if (it != class_map_.end()) return it->second;
    std::size_t dot = old_qname.rfind('.');
    if (dot == std::string::npos) return old_qname;
    return map_package(old_qname.substr(0, dot)) + "." + old_qname.substr(dot + 1);
}

std::string Matching::map_package(const std::string& old_qname) const {
    std::string prefix = old_qname;
    std::string rest;
    while (!prefix.empty()) {
        auto it = package_map_.find(prefix);
        if (it != package_map_.end()) return it->second + rest;
        std::size_t dot = prefix.rfind('.');
        if (dot == std::string::npos) break;
        rest = prefix.substr(dot) + rest;
        prefix.resize(dot);
    }
    return old_qname;
}

Matching match_models(const Model& old_model, const Model& new_model,
                      const PresettingSet& presettings, double threshold) {
    Matching m;

    // Stage A: presettings. Class/package instructions first so attribute
    // subjects resolve through the container pairs they create.
    for (const Presetting& p : presettings.items)
        if (p.subject.kind != RefKind::Attribute) apply_preset(m, old_model, new_model, p);
    for (const Presetting& p : presettings.items)
        if (p.subject.kind == RefKind::Attribute) apply_preset(m, old_model, new_model, p);

    // Stage B: exact matches on (kind, container-mapped qualified name).
    // package_entries() is in preorder, so parents map before children.
    for (const PackageEntry& pe : old_model.package_entries()) {
        ElementRef ref = make_ref(RefKind::Package, pe.qname);
        if (m.find_by_old(ref)) continue;
        const std::string expected =
            join_container(pe.container.empty() ? "" : m.map_package(pe.container),
                           pe.decl->name);
        if (!new_model.find_package(expected)) continue;
        ElementRef counterpart = make_ref(RefKind::Package, expected);
        if (m.find_by_new(counterpart)) continue;
        m.add({ref, counterpart, MatchProvenance::Exact, 1.0});
    }
    for (const ClassEntry& ce : old_model.class_entries()) {
        ElementRef ref = make_ref(RefKind::Class, ce.qname);
        if (m.find_by_old(ref)) continue;
        const std::string expected =
            join_container(m.map_package(ce.container), ce.decl->name);
        if (!new_model.find_class(expected)) continue;
        ElementRef counterpart = make_ref(RefKind::Class, expected);
        if (m.find_by_new(counterpart)) continue;
        m.add({ref, counterpart, MatchProvenance::Exact, 1.0});
    }

    // Stage C: greedy similarity matching for classes.
    {
        std::vector<const ClassEntry*> old_free;
        std::vector<const ClassEntry*> new_free;
        for (const ClassEntry& ce : old_model.class_entries())
            if (!m.find_by_old(make_ref(RefKind::Class, ce.qname))) old_free.push_back(&ce);
        for (const ClassEntry& ce : new_model.class_entries())
            if (!m.find_by_new(make_ref(RefKind::Class, ce.qname))) new_free.push_back(&ce);
        std::vector<Candidate> candidates;
        for (const ClassEntry* oc : old_free) {
            for (const ClassEntry* nc : new_free) {
                double score = 0.6 * name_similarity(oc->decl->name, nc->decl->name) +
                               0.4 * structural_similarity(*oc->decl, *nc->decl);
                if (score >= threshold) candidates.push_back({score, oc->qname, nc->qname});
            }
        }
        std::sort(candidates.begin(), candidates.end(), candidate_less);
        for (const Candidate& c : candidates) {
            ElementRef old_ref = make_ref(RefKind::Class, c.old_name);
            ElementRef new_ref = make_ref(RefKind::Class, c.new_name);
            if (m.find_by_old(old_ref) || m.find_by_new(new_ref)) continue;
            m.add({old_ref, new_ref, MatchProvenance::Similarity, c.score});
        }
    }

    // Attributes: exact by name, then similarity, within each matched class
    // pair. Pairs are visited in old-qname order.
    {
        std::vector<MatchPair> class_pairs;
        for (const MatchPair& p : m.pairs())
            if (p.old_ref.kind == RefKind::Class) class_pairs.push_back(p);
        std::sort(class_pairs.begin(), class_pairs.end(),
                  [](const MatchPair& a, const MatchPair& b) {
                      return a.old_ref.str() < b.old_ref.str();
                  });
        for (const MatchPair& cp : class_pairs) {
            const std::string old_class = cp.old_ref.str();
            const std::string new_class = cp.new_ref.str();
            const ClassDecl* oc = old_model.find_class(old_class);
            const ClassDecl* nc = new_model.find_class(new_class);
            for (const Attribute& oa : oc->attributes) {
                ElementRef old_ref = attr_ref(old_class, oa.name);
                if (m.find_by_old(old_ref)) continue;
                if (!nc->find_attribute(oa.name)) continue;
                ElementRef new_ref = attr_ref(new_class, oa.name);
                if (m.find_by_new(new_ref)) continue;
                m.add({old_ref, new_ref, MatchProvenance::Exact, 1.0});
            }
            std::vector<Candidate> candidates;
            for (const Attribute& oa : oc->attributes) {
                if (m.find_by_old(attr_ref(old_class, oa.name))) continue;
                for (const Attribute& na : nc->attributes) {
                    if (m.find_by_new(attr_ref(new_class, na.name))) continue;
                    double score = 0.7 * name_similarity(oa.name, na.name) +
                                   0.3 * (oa.type_name == na.type_name ? 1.0 : 0.0);
                    if (score >= threshold) candidates.push_back({score, oa.name, na.name});
                }
            }
            std::sort(candidates.begin(), candidates.end(), candidate_less);
            for (const Candidate& c : candidates) {
                ElementRef old_ref = attr_ref(old_class, c.old_name);
                ElementRef new_ref = attr_ref(new_class, c.new_name);
                if (m.find_by_old(old_ref) || m.find_by_new(new_ref)) continue;
                m.add({old_ref, new_ref, MatchProvenance::Similarity, c.score});
            }
        }
    }

    // Associations: exact on (mapped source, mapped target, name), then by
    // name similarity alone.
    for (const Association& a : old_model.associations()) {
        ElementRef ref = assoc_ref(a.name);
        if (m.find_by_old(ref)) continue;
        const Association* na = new_model.find_association(a.name);
        if (!na) continue;
        if (m.find_by_new(assoc_ref(na->name))) continue;
        if (m.map_class(a.source.str()) != na->source.str()) continue;
        if (m.map_class(a.target.str()) != na->target.str()) continue;
        m.add({ref, assoc_ref(na->name), MatchProvenance::Exact, 1.0});
    }
    {
        std::vector<Candidate> candidates;
        for (const Association& oa : old_model.associations()) {
            if (m.find_by_old(assoc_ref(oa.name))) continue;
            for (const Association& na : new_model.associations()) {
                if (m.find_by_new(assoc_ref(na.name))) continue;
                double score = name_similarity(oa.name, na.name);
                if (score >= threshold) candidates.push_back({score, oa.name, na.name});
            }
        }
        std::sort(candidates.begin(), candidates.end(), candidate_less);
        for (const Candidate& c : candidates) {
            ElementRef old_ref = assoc_ref(c.old_name);
            ElementRef new_ref = assoc_ref(c.new_name);
            if (m.find_by_old(old_ref) || m.find_by_new(new_ref)) continue;
            m.add({old_ref, new_ref, MatchProvenance::Similarity, c.score});
        }
    }

    return m;
}

}  // namespace cdimpact
