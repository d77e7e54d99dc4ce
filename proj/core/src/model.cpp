#include "cdimpact/model.hpp"

#include <algorithm>
#include <cctype>

namespace cdimpact {

namespace {

std::string format_location(SourceLocation loc) {
    return "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column);
}

}  // namespace

ParseError::ParseError(const std::string& message, SourceLocation loc)
    : std::runtime_error(format_location(loc) + ": " + message), loc_(loc) {}

ModelError::ModelError(const std::string& message, std::string subject)
    : std::runtime_error(message), subject_(std::move(subject)) {}

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(text[0])) && text[0] != '_') return false;
    return std::all_of(text.begin(), text.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

QualifiedName QualifiedName::parse(std::string_view text) {
    QualifiedName result;
    std::string_view name_part = text;
    if (auto hash = text.find('#'); hash != std::string_view::npos) {
        name_part = text.substr(0, hash);
        std::string_view attr = text.substr(hash + 1);
        if (!is_identifier(attr)) {
            throw ModelError("malformed qualified name '" + std::string(text) + "'");
        }
        result.attribute = std::string(attr);
    }
    while (!name_part.empty()) {
        auto dot = name_part.find('.');
        std::string_view segment =
            dot == std::string_view::npos ? name_part : name_part.substr(0, dot);
        if (!is_identifier(segment)) {
            throw ModelError("malformed qualified name '" + std::string(text) + "'");
        }
        result.segments.emplace_back(segment);
        if (dot == std::string_view::npos) break;
        name_part.remove_prefix(dot + 1);
        if (name_part.empty()) {
            throw ModelError("malformed qualified name '" + std::string(text) + "'");
        }
    }
    if (result.segments.empty()) {
        throw ModelError("malformed qualified name '" + std::string(text) + "'");
    }
    return result;
}

std::string QualifiedName::str() const {
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i > 0) out += '.';
        out += segments[i];
    }
    if (attribute) {
        out += '#';
        out += *attribute;
    }
    return out;
}

std::string QualifiedName::simple_name() const {
    if (attribute) return *attribute;
    if (segments.empty()) return {};
    return segments.back();
}

QualifiedName QualifiedName::container() const {
    QualifiedName out;
    out.segments = segments;
    if (!attribute && !out.segments.empty()) out.segments.pop_back();
    return out;
}

std::string Cardinality::str() const {
    if (!upper) return "[" + std::to_string(lower) + "..*]";
    if (*upper == lower) return "[" + std::to_string(lower) + "]";
    return "[" + std::to_string(lower) + ".." + std::to_string(*upper) + "]";
}

bool Attribute::has_stereotype(std::string_view s) const {
    return std::find(stereotypes.begin(), stereotypes.end(), s) != stereotypes.end();
}

bool ClassDecl::has_stereotype(std::string_view s) const {
    return std::find(stereotypes.begin(), stereotypes.end(), s) != stereotypes.end();
}

const Attribute* ClassDecl::find_attribute(std::string_view name) const {
    for (const auto& a : attributes) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

std::string to_string(RefKind kind) {
    switch (kind) {
        case RefKind::Package: return "package";
        case RefKind::Class: return "class";
        case RefKind::Attribute: return "attribute";
        case RefKind::Association: return "association";
    }
    return {};
}

Model::Model(std::vector<Package> packages, std::vector<Association> associations)
    : packages_(std::move(packages)), associations_(std::move(associations)) {
    validate_and_index();
}

Model::Model(const Model& other)
    : packages_(other.packages_), associations_(other.associations_) {
    validate_and_index();
}

Model& Model::operator=(const Model& other) {
    if (this != &other) {
        packages_ = other.packages_;
        associations_ = other.associations_;
        validate_and_index();
    }
    return *this;
}

Model::Model(Model&& other) noexcept
    : packages_(std::move(other.packages_)), associations_(std::move(other.associations_)) {
    // Vector moves keep element storage alive, but reindexing keeps the
    // invariant independent of that detail.
    validate_and_index();
}

Model& Model::operator=(Model&& other) noexcept {
    if (this != &other) {
        packages_ = std::move(other.packages_);
        associations_ = std::move(other.associations_);
        validate_and_index();
    }
    return *this;
}

void Model::validate_and_index() {
    package_entries_.clear();
    class_entries_.clear();
    attribute_entries_.clear();
    package_index_.clear();
    class_index_.clear();
    association_index_.clear();

    // Preorder walk: parents before children, declaration order otherwise.
    struct Walker {
        Model& m;

        void walk(const Package& pkg, const std::string& parent_qname) {
            std::string qname = parent_qname.empty() ? pkg.name : parent_qname + "." + pkg.name;
            if (!m.package_index_.emplace(qname, m.package_entries_.size()).second) {
                throw ModelError("duplicate package '" + qname + "'", qname);
            }
            m.package_entries_.push_back({qname, parent_qname, &pkg});
            for (const auto& cls : pkg.classes) {
                std::string cls_qname = qname + "." + cls.name;
                if (!m.class_index_.emplace(cls_qname, m.class_entries_.size()).second) {
                    throw ModelError("duplicate class '" + cls_qname + "'", cls_qname);
                }
                m.class_entries_.push_back({cls_qname, qname, &cls});
                std::vector<std::string_view> seen;
                for (const auto& attr : cls.attributes) {
                    std::string ref = cls_qname + "#" + attr.name;
                    if (std::find(seen.begin(), seen.end(), attr.name) != seen.end()) {
                        throw ModelError("duplicate attribute '" + ref + "'", ref);
                    }
                    seen.push_back(attr.name);
                    m.attribute_entries_.push_back({ref, cls_qname, &attr});
                }
            }
            for (const auto& sub : pkg.packages) walk(sub, qname);
        }
    };
    Walker walker{*this};
    for (const auto& pkg : packages_) walker.walk(pkg, "");

    for (const auto& cls : class_entries_) {
        if (!cls.decl->superclass) continue;
        const std::string super = cls.decl->superclass->str();
        if (!class_index_.contains(super)) {
            throw ModelError("unresolvable superclass '" + super + "' of '" + cls.qname + "'",
                             cls.qname);
        }
    }

    for (std::size_t i = 0; i < associations_.size(); ++i) {
        const Association& assoc = associations_[i];
        if (!association_index_.emplace(assoc.name, i).second) {
            throw ModelError("duplicate association '" + assoc.name + "'", assoc.name);
        }
        for (const QualifiedName* end : {&assoc.source, &assoc.target}) {
            if (!class_index_.contains(end->str())) {
                throw ModelError("unresolvable association end '" + end->str() + "' of '" +
                                     assoc.name + "'",
                                 assoc.name);
            }
        }
    }

    for (const auto& card_holder : attribute_entries_) {
        const Cardinality& c = card_holder.decl->cardinality;
        if (c.upper && *c.upper < c.lower) {
            throw ModelError("invalid cardinality " + c.str() + " of '" + card_holder.qname + "'",
                             card_holder.qname);
        }
    }
}

const Package* Model::find_package(const std::string& qname) const {
    auto it = package_index_.find(qname);
    return it == package_index_.end() ? nullptr : package_entries_[it->second].decl;
}

const ClassDecl* Model::find_class(const std::string& qname) const {
    auto it = class_index_.find(qname);
    return it == class_index_.end() ? nullptr : class_entries_[it->second].decl;
}

const ClassEntry* Model::find_class_entry(const std::string& qname) const {
    auto it = class_index_.find(qname);
    return it == class_index_.end() ? nullptr : &class_entries_[it->second];
}

const Attribute* Model::find_attribute(const std::string& class_qname,
                                       const std::string& attr) const {
    const ClassDecl* cls = find_class(class_qname);
    return cls ? cls->find_attribute(attr) : nullptr;
}

const Association* Model::find_association(const std::string& name) const {
    auto it = association_index_.find(name);
    return it == association_index_.end() ? nullptr : &associations_[it->second];
}

std::optional<ResolvedElement> resolve_ref(const Model& m, const ElementRef& ref) {
    switch (ref.kind) {
        case RefKind::Package: {
            if (ref.qname.has_attribute()) return std::nullopt;
            if (const Package* p = m.find_package(ref.qname.str())) return ResolvedElement{p};
            return std::nullopt;
        }
        case RefKind::Class: {
            if (ref.qname.has_attribute()) return std::nullopt;
            if (const ClassDecl* c = m.find_class(ref.qname.str())) return ResolvedElement{c};
            return std::nullopt;
        }
        case RefKind::Attribute: {
            if (!ref.qname.has_attribute()) return std::nullopt;
            const Attribute* a =
                m.find_attribute(ref.qname.container().str(), *ref.qname.attribute);
            if (a) return ResolvedElement{a};
            return std::nullopt;
        }
        case RefKind::Association: {
            if (ref.qname.has_attribute() || ref.qname.segments.size() != 1) return std::nullopt;
            if (const Association* a = m.find_association(ref.qname.str()))
                return ResolvedElement{a};
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace cdimpact
