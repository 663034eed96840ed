#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ufix/lattice.hpp"

namespace ufix {

/// An update rule: a non-empty finite set of non-zero offsets, kept sorted.
class Rule {
public:
    Rule() = default;
    // Throws ValidationError on an empty rule, a (0,0) offset or a duplicate.
    explicit Rule(std::vector<LatticeVector> offsets);
    Rule(std::initializer_list<LatticeVector> offsets) : Rule(std::vector<LatticeVector>(offsets)) {}

    const std::vector<LatticeVector>& offsets() const { return offsets_; }
    std::size_t size() const { return offsets_.size(); }
    auto begin() const { return offsets_.begin(); }
    auto end() const { return offsets_.end(); }

    bool subset_of(const Rule& other) const;
    Rule rotated90() const;

    friend bool operator==(const Rule&, const Rule&) = default;
    friend auto operator<=>(const Rule&, const Rule&) = default;

private:
    std::vector<LatticeVector> offsets_;
};

std::ostream& operator<<(std::ostream& os, const Rule& r);

/// A finite family U = {X_1, ..., X_m} of update rules, in insertion order.
class UpdateFamily {
public:
    UpdateFamily() = default;
    // Throws ValidationError on an empty family or a repeated rule.
    explicit UpdateFamily(std::vector<Rule> rules, std::string name = {});

    const std::vector<Rule>& rules() const { return rules_; }
    const Rule& rule(std::size_t i) const { return rules_[i]; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    // Number of rules, m.
    std::size_t m() const { return rules_.size(); }
    // Max over all offsets of the max-norm.
    std::int64_t radius() const { return radius_; }

    // Every distinct offset of every rule.
    std::vector<LatticeVector> all_offsets() const;
    // FNV-1a over the canonical (sorted) rule list; independent of rule order.
    std::uint64_t hash() const;

    UpdateFamily rotated90() const;

private:
    std::vector<Rule> rules_;
    std::string name_;
    std::int64_t radius_ = 0;
};

std::ostream& operator<<(std::ostream& os, const UpdateFamily& f);

/// Drops every rule that is a strict superset of another rule. Closure
/// behaviour is unchanged but m (and hence voter rates) changes.
UpdateFamily normalize(const UpdateFamily& family);

namespace catalog {

// All subsets of size >= r of {+-e1, +-e2}, smallest first.
UpdateFamily neighbours(int r);
UpdateFamily duarte();
// All 3-subsets of {+-e1, +-e2, +-2e1, +-2e2}.
UpdateFamily u38();
// The triangular-droplet family with stable set {-e1, (1,1), (1,-1)}.
UpdateFamily triangle();
// triangle() plus the compensating rule {(-1,2),(-1,-1)}.
UpdateFamily triangle_fair();
UpdateFamily five_rule();
UpdateFamily unit_singletons();

// Resolves a catalog name ("duarte", "n22", "n32", "u38", "triangle",
// "triangle_fair", "five_rule", "singletons"); throws on an unknown name.
UpdateFamily by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace catalog

}  // namespace ufix
