#include "cdimpact/similarity.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace cdimpact {

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    if (a.empty()) return b.size();

    std::vector<std::size_t> row(a.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});

    for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t diag = row[0];
        row[0] = j;
        for (std::size_t i = 1; i <= a.size(); ++i) {
            std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[i];
            row[i] = std::min({row[i] + 1, row[i - 1] + 1, subst});
        }
    }
    return row[a.size()];
}

double name_similarity(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t longest = std::max(a.size(), b.size());
    return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

double structural_similarity(const ClassDecl& a, const ClassDecl& b) {
    if (a.attributes.empty() && b.attributes.empty()) return 1.0;

    std::vector<std::string_view> names_a, names_b;
    names_a.reserve(a.attributes.size());
    names_b.reserve(b.attributes.size());
    for (const auto& attr : a.attributes) names_a.push_back(attr.name);
    for (const auto& attr : b.attributes) names_b.push_back(attr.name);
    std::sort(names_a.begin(), names_a.end());
    names_a.erase(std::unique(names_a.begin(), names_a.end()), names_a.end());
    std::sort(names_b.begin(), names_b.end());
    names_b.erase(std::unique(names_b.begin(), names_b.end()), names_b.end());

    std::size_t common = 0;
    auto ia = names_a.begin();
    auto ib = names_b.begin();
    while (ia != names_a.end() && ib != names_b.end()) {
        if (*ia == *ib) {
            ++common;
            ++ia;
            ++ib;
        } else if (*ia < *ib) {
            ++ia;
        } else {
            ++ib;
        }
    }
    std::size_t unions = names_a.size() + names_b.size() - common;
    return unions == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(unions);
}

}  // namespace cdimpact
