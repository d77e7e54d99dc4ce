#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace cdimpact {

struct SourceLocation {
    int line = 0;
    int column = 0;
};

// Error raised by the textual parsers. what() already contains "line L, column C".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, SourceLocation loc);
    SourceLocation where() const { return loc_; }

private:
    SourceLocation loc_;
};

// Semantic model error (duplicate names, dangling references). Carries the
// qualified name of the offending element so parsers can map it back to a
// source location.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& message, std::string subject = "");
    const std::string& subject() const { return subject_; }

private:
    std::string subject_;
};

// Dotted name with an optional "#attribute" part: "a.b.C" or "a.b.C#attr".
// A default-constructed QualifiedName (no segments) denotes the model root
// and renders as the empty string; parse() rejects it.
struct QualifiedName {
    std::vector<std::string> segments;
    std::optional<std::string> attribute;

    static QualifiedName parse(std::string_view text);

    std::string str() const;
    std::string simple_name() const;
    QualifiedName container() const;
    bool has_attribute() const { return attribute.has_value(); }
    bool empty() const { return segments.empty() && !attribute; }

    bool operator==(const QualifiedName&) const = default;
    bool operator<(const QualifiedName& other) const { return str() < other.str(); }
};

// lower..upper with upper unset meaning '*'. Defaults to [1..1].
struct Cardinality {
    unsigned lower = 1;
    std::optional<unsigned> upper = 1;

    bool bounded() const { return upper.has_value(); }
    std::string str() const;

    bool operator==(const Cardinality&) const = default;
};

struct Attribute {
    std::string name;
    std::string type_name;
    Cardinality cardinality;
    std::vector<std::string> stereotypes;

    bool has_stereotype(std::string_view s) const;
    bool operator==(const Attribute&) const = default;
};

struct ClassDecl {
    std::string name;
    std::vector<std::string> stereotypes;
    std::optional<QualifiedName> superclass;
    std::vector<Attribute> attributes;

    bool has_stereotype(std::string_view s) const;
    const Attribute* find_attribute(std::string_view name) const;
    bool operator==(const ClassDecl&) const = default;
};

struct Package {
    std::string name;
    std::vector<Package> packages;
    std::vector<ClassDecl> classes;

    bool operator==(const Package&) const = default;
};

struct Association {
    std::string name;
    Cardinality source_card;
    QualifiedName source;
    Cardinality target_card;
    QualifiedName target;

    bool operator==(const Association&) const = default;
};

enum class RefKind { Package, Class, Attribute, Association };

std::string to_string(RefKind kind);

// Typed reference into a Model. Attribute refs carry the '#' part in qname;
// association refs use the association name as a single segment.
struct ElementRef {
    RefKind kind = RefKind::Class;
    QualifiedName qname;

    std::string str() const { return qname.str(); }

    bool operator==(const ElementRef&) const = default;
};

// Flattened, declaration-ordered views used by the differ.
struct PackageEntry {
    std::string qname;
    std::string container;  // parent package qname, "" at top level
    const Package* decl = nullptr;
};

struct ClassEntry {
    std::string qname;
    std::string container;
    const ClassDecl* decl = nullptr;
};

struct AttributeEntry {
    std::string qname;  // "class#attr"
    std::string class_qname;
    const Attribute* decl = nullptr;
};

// Immutable class-diagram model: a package tree plus top-level associations.
// Construction validates name uniqueness and reference resolution, then
// builds lookup indexes. Copies reindex themselves.
class Model {
public:
    Model() = default;
    Model(std::vector<Package> packages, std::vector<Association> associations);

    Model(const Model& other);
    Model& operator=(const Model& other);
    Model(Model&& other) noexcept;
    Model& operator=(Model&& other) noexcept;

    const std::vector<Package>& packages() const { return packages_; }
    const std::vector<Association>& associations() const { return associations_; }

    const std::vector<PackageEntry>& package_entries() const { return package_entries_; }
    const std::vector<ClassEntry>& class_entries() const { return class_entries_; }
    const std::vector<AttributeEntry>& attribute_entries() const { return attribute_entries_; }

    const Package* find_package(const std::string& qname) const;
    const ClassDecl* find_class(const std::string& qname) const;
    const ClassEntry* find_class_entry(const std::string& qname) const;
    const Attribute* find_attribute(const std::string& class_qname, const std::string& attr) const;
    const Association* find_association(const std::string& name) const;

    bool empty() const { return packages_.empty() && associations_.empty(); }

    bool operator==(const Model& other) const {
        return packages_ == other.packages_ && associations_ == other.associations_;
    }

private:
    void validate_and_index();

    std::vector<Package> packages_;
    std::vector<Association> associations_;

    std::vector<PackageEntry> package_entries_;
    std::vector<ClassEntry> class_entries_;
    std::vector<AttributeEntry> attribute_entries_;
    std::unordered_map<std::string, std::size_t> package_index_;
    std::unordered_map<std::string, std::size_t> class_index_;
    std::unordered_map<std::string, std::size_t> association_index_;
};

using ResolvedElement =
    std::variant<const Package*, const ClassDecl*, const Attribute*, const Association*>;

// Returns the referenced element, or nullopt when the name does not resolve
// or resolves to an element of a different kind.
std::optional<ResolvedElement> resolve_ref(const Model& m, const ElementRef& ref);

bool is_identifier(std::string_view text);

}  // namespace cdimpact
