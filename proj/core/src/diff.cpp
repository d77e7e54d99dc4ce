#include "cdimpact/diff.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <utility>

#include "json.hpp"

namespace cdimpact {

namespace {

constexpr std::array<const char*, kDiffKindCount> kDiffKindNames = {
    "AddedPackage",
    "DeletedPackage",
    "RenamedPackage",
    "AddedClass",
    "DeletedClass",
    "RenamedClass",
    "MovedClass",
    "ChangedClassProperty",
    "AddedAttribute",
    "DeletedAttribute",
    "RenamedAttribute",
    "MovedAttribute",
    "ChangedAttributeType",
    "ChangedAttributeCardinality",
    "AddedStereotype",
    "RemovedStereotype",
    "AddedAssociation",
    "DeletedAssociation",
    "ChangedAssociationEnd",
};

ElementRef make_ref(RefKind kind, const std::string& qname) {
    if (kind == RefKind::Association) {
        ElementRef ref;
        ref.kind = kind;
        ref.qname.segments = {qname};
        return ref;
    }
    return ElementRef{kind, QualifiedName::parse(qname)};
}

const char* kind_word(RefKind kind) {
    switch (kind) {
        case RefKind::Package: return "package";
        case RefKind::Class: return "class";
        case RefKind::Attribute: return "attribute";
        case RefKind::Association: return "association";
    }
    return "?";
}

std::string facet_word(ChangeFacet facet) { return to_string(facet); }

// Stereotype set deltas for one matched pair.
void stereotype_diffs(std::vector<ModelDifference>& out, const std::vector<std::string>& old_set,
                      const std::vector<std::string>& new_set, const ElementRef& old_ref,
                      const ElementRef& new_ref) {
    for (const std::string& s : old_set) {
        if (std::find(new_set.begin(), new_set.end(), s) == new_set.end()) {
            ModelDifference d;
            d.kind = DiffKind::RemovedStereotype;
            d.subject = old_ref;
            d.facet = ChangeFacet::Stereotype;
            d.old_value = s;
            d.counterpart = new_ref;
            out.push_back(std::move(d));
        }
    }
    for (const std::string& s : new_set) {
        if (std::find(old_set.begin(), old_set.end(), s) == old_set.end()) {
            ModelDifference d;
            d.kind = DiffKind::AddedStereotype;
            d.subject = new_ref;
            d.facet = ChangeFacet::Stereotype;
            d.new_value = s;
            d.counterpart = old_ref;
            out.push_back(std::move(d));
        }
    }
}

ModelDifference change(DiffKind kind, ChangeFacet facet, const ElementRef& subject,
                       std::string old_value, std::string new_value,
                       const ElementRef& counterpart) {
    ModelDifference d;
    d.kind = kind;
    d.subject = subject;
    d.facet = facet;
    d.old_value = std::move(old_value);
    d.new_value = std::move(new_value);
    d.counterpart = counterpart;
    return d;
}

nlohmann::ordered_json ref_or_null(const std::optional<ElementRef>& ref) {
    if (!ref) return nullptr;
    return ref->str();
}

nlohmann::ordered_json opt_or_null(const std::optional<std::string>& value) {
    if (!value) return nullptr;
    return *value;
}

}  // namespace

std::string to_string(DiffKind kind) { return kDiffKindNames[static_cast<int>(kind)]; }

std::optional<DiffKind> diff_kind_from_string(std::string_view text) {
    for (int i = 0; i < kDiffKindCount; ++i) {
        if (text == kDiffKindNames[static_cast<std::size_t>(i)]) return static_cast<DiffKind>(i);
    }
    return std::nullopt;
}

std::string to_string(ChangeFacet facet) {
    switch (facet) {
        case ChangeFacet::None: return "none";
        case ChangeFacet::Superclass: return "superclass";
        case ChangeFacet::Type: return "type";
        case ChangeFacet::Cardinality: return "cardinality";
        case ChangeFacet::Stereotype: return "stereotype";
        case ChangeFacet::Source: return "source";
        case ChangeFacet::Target: return "target";
        case ChangeFacet::SourceCardinality: return "source cardinality";
        case ChangeFacet::TargetCardinality: return "target cardinality";
        case ChangeFacet::Name: return "name";
    }
    return "?";
}

std::string describe_difference(const ModelDifference& d) {
    const std::string subject = d.subject.str();
    const char* word = kind_word(d.subject.kind);
    switch (d.kind) {
        case DiffKind::AddedPackage:
        case DiffKind::AddedClass:
        case DiffKind::AddedAttribute:
        case DiffKind::AddedAssociation:
            return std::string("Added ") + word + " '" + subject + "'";
        case DiffKind::DeletedPackage:
        case DiffKind::DeletedClass:
        case DiffKind::DeletedAttribute:
        case DiffKind::DeletedAssociation:
            return std::string("Deleted ") + word + " '" + subject + "'";
        case DiffKind::RenamedPackage:
        case DiffKind::RenamedClass:
        case DiffKind::RenamedAttribute:
            return std::string("Renamed ") + word + " '" + subject + "' to '" +
                   d.new_value.value_or("") + "'";
        case DiffKind::MovedClass:
        case DiffKind::MovedAttribute:
            return std::string("Moved ") + word + " '" + subject + "' to '" +
                   d.new_value.value_or("") + "'";
        case DiffKind::AddedStereotype:
            return "Added stereotype '" + d.new_value.value_or("") + "' to '" + subject + "'";
        case DiffKind::RemovedStereotype:
            return "Removed stereotype '" + d.old_value.value_or("") + "' from '" + subject + "'";
        case DiffKind::ChangedClassProperty:
        case DiffKind::ChangedAttributeType:
        case DiffKind::ChangedAttributeCardinality:
        case DiffKind::ChangedAssociationEnd:
            return "Changed " + facet_word(d.facet) + " of '" + subject + "' from '" +
                   d.old_value.value_or("") + "' to '" + d.new_value.value_or("") + "'";
    }
    return "?";
}

bool canonical_diff_less(const ModelDifference& a, const ModelDifference& b) {
    auto key = [](const ModelDifference& d) {
        return std::make_tuple(static_cast<int>(d.kind), d.subject.str(),
                               static_cast<int>(d.facet),
                               d.old_value.has_value(), d.old_value.value_or(""),
                               d.new_value.has_value(), d.new_value.value_or(""),
                               d.counterpart.has_value(),
                               d.counterpart ? d.counterpart->str() : std::string());
    };
    return key(a) < key(b);
}

DiffModel::DiffModel(std::shared_ptr<const Model> old_model,
                     std::shared_ptr<const Model> new_model,
                     std::vector<ModelDifference> entries)
    : old_model_(std::move(old_model)),
      new_model_(std::move(new_model)),
      entries_(std::move(entries)) {
    std::stable_sort(entries_.begin(), entries_.end(), canonical_diff_less);
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

std::string DiffModel::to_lines() const {
    std::string out;
    for (const ModelDifference& d : entries_) {
        out += to_string(d.kind);
        out += '\t';
        out += d.subject.str();
        out += '\t';
        out += d.old_value.value_or("");
        out += '\t';
        out += d.new_value.value_or("");
        out += '\t';
        out += d.counterpart ? d.counterpart->str() : "";
        out += '\t';
        out += describe_difference(d);
        out += '\n';
    }
    return out;
}

std::string DiffModel::to_json() const {
    nlohmann::ordered_json root;
    root["differences"] = nlohmann::ordered_json::array();
    for (const ModelDifference& d : entries_) {
        nlohmann::ordered_json entry;
        entry["kind"] = to_string(d.kind);
        entry["subject"] = d.subject.str();
        entry["subjectKind"] = cdimpact::to_string(d.subject.kind);
        entry["facet"] = to_string(d.facet);
        entry["old"] = opt_or_null(d.old_value);
        entry["new"] = opt_or_null(d.new_value);
        entry["counterpart"] = ref_or_null(d.counterpart);
        entry["counterpartKind"] =
            d.counterpart ? nlohmann::ordered_json(cdimpact::to_string(d.counterpart->kind))
                          : nlohmann::ordered_json(nullptr);
        entry["description"] = describe_difference(d);
        root["differences"].push_back(std::move(entry));
    }
    return root.dump(2) + "\n";
}

DiffModel compute_diff(std::shared_ptr<const Model> old_model,
                       std::shared_ptr<const Model> new_model, const Matching& matching) {
    const Model& o = *old_model;
    const Model& n = *new_model;
    std::vector<ModelDifference> out;

    // Packages.
    for (const PackageEntry& pe : o.package_entries()) {
        ElementRef ref = make_ref(RefKind::Package, pe.qname);
        const MatchPair* pair = matching.find_by_old(ref);
        if (!pair) {
            ModelDifference d;
            d.kind = DiffKind::DeletedPackage;
            d.subject = ref;
            out.push_back(std::move(d));
            continue;
        }
        const std::string old_simple = pe.decl->name;
        const std::string new_simple = pair->new_ref.qname.simple_name();
        if (old_simple != new_simple) {
            ModelDifference d;
            d.kind = DiffKind::RenamedPackage;
            d.subject = ref;
            d.old_value = old_simple;
            d.new_value = new_simple;
            d.counterpart = pair->new_ref;
            out.push_back(std::move(d));
        }
    }
    for (const PackageEntry& pe : n.package_entries()) {
        ElementRef ref = make_ref(RefKind::Package, pe.qname);
        if (matching.find_by_new(ref)) continue;
        ModelDifference d;
        d.kind = DiffKind::AddedPackage;
        d.subject = ref;
        out.push_back(std::move(d));
    }

    // Classes.
    for (const ClassEntry& ce : o.class_entries()) {
        ElementRef ref = make_ref(RefKind::Class, ce.qname);
        const MatchPair* pair = matching.find_by_old(ref);
        if (!pair) {
            ModelDifference d;
            d.kind = DiffKind::DeletedClass;
            d.subject = ref;
            out.push_back(std::move(d));
            continue;
        }
        const ClassEntry* ne = n.find_class_entry(pair->new_ref.str());
        if (ce.decl->name != ne->decl->name) {
            ModelDifference d;
            d.kind = DiffKind::RenamedClass;
            d.subject = ref;
            d.old_value = ce.decl->name;
            d.new_value = ne->decl->name;
            d.counterpart = pair->new_ref;
            out.push_back(std::move(d));
        }
        if (matching.map_package(ce.container) != ne->container) {
            ModelDifference d;
            d.kind = DiffKind::MovedClass;
            d.subject = ref;
            d.old_value = ce.container;
            d.new_value = ne->container;
            d.counterpart = pair->new_ref;
            out.push_back(std::move(d));
        }
        const std::string old_super = ce.decl->superclass ? ce.decl->superclass->str() : "";
        const std::string mapped_super = old_super.empty() ? "" : matching.map_class(old_super);
        const std::string new_super = ne->decl->superclass ? ne->decl->superclass->str() : "";
        if (mapped_super != new_super) {
            out.push_back(change(DiffKind::ChangedClassProperty, ChangeFacet::Superclass, ref,
                                 old_super, new_super, pair->new_ref));
        }
        stereotype_diffs(out, ce.decl->stereotypes, ne->decl->stereotypes, ref, pair->new_ref);
    }
    for (const ClassEntry& ce : n.class_entries()) {
        ElementRef ref = make_ref(RefKind::Class, ce.qname);
        if (matching.find_by_new(ref)) continue;
        ModelDifference d;
        d.kind = DiffKind::AddedClass;
        d.subject = ref;
        out.push_back(std::move(d));
    }

    // Attributes.
    for (const AttributeEntry& ae : o.attribute_entries()) {
        ElementRef ref = make_ref(RefKind::Attribute, ae.qname);
        const MatchPair* pair = matching.find_by_old(ref);
        if (!pair) {
            ModelDifference d;
            d.kind = DiffKind::DeletedAttribute;
            d.subject = ref;
            out.push_back(std::move(d));
            continue;
        }
        const std::string new_class = pair->new_ref.qname.container().str();
        const std::string new_name = *pair->new_ref.qname.attribute;
        const Attribute* na = n.find_attribute(new_class, new_name);
        if (ae.decl->name != na->name) {
            ModelDifference d;
            d.kind = DiffKind::RenamedAttribute;
            d.subject = ref;
            d.old_value = ae.decl->name;
            d.new_value = na->name;
            d.counterpart = pair->new_ref;
            out.push_back(std::move(d));
        }
        if (matching.map_class(ae.class_qname) != new_class) {
            ModelDifference d;
            d.kind = DiffKind::MovedAttribute;
            d.subject = ref;
            d.old_value = ae.class_qname;
            d.new_value = new_class;
            d.counterpart = pair->new_ref;
            out.push_back(std::move(d));
        }
        if (ae.decl->type_name != na->type_name) {
            out.push_back(change(DiffKind::ChangedAttributeType, ChangeFacet::Type, ref,
                                 ae.decl->type_name, na->type_name, pair->new_ref));
        }
        if (!(ae.decl->cardinality == na->cardinality)) {
            out.push_back(change(DiffKind::ChangedAttributeCardinality, ChangeFacet::Cardinality,
                                 ref, ae.decl->cardinality.str(), na->cardinality.str(),
                                 pair->new_ref));
        }
        stereotype_diffs(out, ae.decl->stereotypes, na->stereotypes, ref, pair->new_ref);
    }
    for (const AttributeEntry& ae : n.attribute_entries()) {
        ElementRef ref = make_ref(RefKind::Attribute, ae.qname);
        if (matching.find_by_new(ref)) continue;
        ModelDifference d;
        d.kind = DiffKind::AddedAttribute;
        d.subject = ref;
        out.push_back(std::move(d));
    }

    // Associations.
    for (const Association& a : o.associations()) {
        ElementRef ref = make_ref(RefKind::Association, a.name);
        const MatchPair* pair = matching.find_by_old(ref);
        if (!pair) {
            ModelDifference d;
            d.kind = DiffKind::DeletedAssociation;
            d.subject = ref;
            out.push_back(std::move(d));
            continue;
        }
        const Association* na = n.find_association(pair->new_ref.str());
        if (a.name != na->name) {
            out.push_back(change(DiffKind::ChangedAssociationEnd, ChangeFacet::Name, ref, a.name,
                                 na->name, pair->new_ref));
        }
        if (matching.map_class(a.source.str()) != na->source.str()) {
            out.push_back(change(DiffKind::ChangedAssociationEnd, ChangeFacet::Source, ref,
                                 a.source.str(), na->source.str(), pair->new_ref));
        }
        if (matching.map_class(a.target.str()) != na->target.str()) {
            out.push_back(change(DiffKind::ChangedAssociationEnd, ChangeFacet::Target, ref,
                                 a.target.str(), na->target.str(), pair->new_ref));
        }
        if (!(a.source_card == na->source_card)) {
            out.push_back(change(DiffKind::ChangedAssociationEnd, ChangeFacet::SourceCardinality,
                                 ref, a.source_card.str(), na->source_card.str(), pair->new_ref));
        }
        if (!(a.target_card == na->target_card)) {
            out.push_back(change(DiffKind::ChangedAssociationEnd, ChangeFacet::TargetCardinality,
                                 ref, a.target_card.str(), na->target_card.str(), pair->new_ref));
        }
    }
    for (const Association& a : n.associations()) {
        ElementRef ref = make_ref(RefKind::Association, a.name);
        if (matching.find_by_new(ref)) continue;
        ModelDifference d;
        d.kind = DiffKind::AddedAssociation;
        d.subject = ref;
        out.push_back(std::move(d));
    }

    return DiffModel(std::move(old_model), std::move(new_model), std::move(out));
}

}  // namespace cdimpact
