#include "ufix/family.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ufix {

Rule::Rule(std::vector<LatticeVector> offsets) : offsets_(std::move(offsets)) {
    if (offsets_.empty()) throw ValidationError("update rule must be non-empty");
    std::sort(offsets_.begin(), offsets_.end());
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (offsets_[i].is_zero()) throw ValidationError("update rule contains the origin [0,0]");
        if (i > 0 && offsets_[i] == offsets_[i - 1]) {
            std::ostringstream os;
            os << "update rule repeats offset " << offsets_[i];
            throw ValidationError(os.str());
        }
    }
}

bool Rule::subset_of(const Rule& other) const {
    return std::includes(other.offsets_.begin(), other.offsets_.end(), offsets_.begin(), offsets_.end());
}

Rule Rule::rotated90() const {
    std::vector<LatticeVector> out;
    out.reserve(offsets_.size());
    for (const auto& v : offsets_) out.push_back(rot90(v));
    return Rule(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const Rule& r) {
    os << '{';
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r.offsets()[i];
    return os << '}';
}

UpdateFamily::UpdateFamily(std::vector<Rule> rules, std::string name)
    : rules_(std::move(rules)), name_(std::move(name)) {
    if (rules_.empty()) throw ValidationError("update family must contain at least one rule");
    for (std::size_t i = 0; i < rules_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (rules_[i] == rules_[j]) {
                std::ostringstream os;
                os << "rule " << i << " duplicates rule " << j;
                throw ValidationError(os.str());
            }
    for (const auto& r : rules_)
        for (const auto& v : r) radius_ = std::max(radius_, max_norm(v));
}

std::vector<LatticeVector> UpdateFamily::all_offsets() const {
    std::vector<LatticeVector> out;
    for (const auto& r : rules_) out.insert(out.end(), r.begin(), r.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::uint64_t UpdateFamily::hash() const {
    auto sorted = rules_;
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::int64_t v) {
        auto u = static_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            h ^= (u >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& r : sorted) {
        feed(static_cast<std::int64_t>(r.size()));
        for (const auto& v : r) {
            feed(v.x);
            feed(v.y);
        }
    }
    return h;
}

UpdateFamily UpdateFamily::rotated90() const {
    std::vector<Rule> out;
    for (const auto& r : rules_) out.push_back(r.rotated90());
    return UpdateFamily(std::move(out), name_.empty() ? name_ : name_ + "_rot90");
}

std::ostream& operator<<(std::ostream& os, const UpdateFamily& f) {
    os << (f.name().empty() ? "family" : f.name()) << " [m=" << f.m() << "] {";
    for (std::size_t i = 0; i < f.m(); ++i) os << (i ? "," : "") << f.rule(i);
    return os << '}';
}

UpdateFamily normalize(const UpdateFamily& family) {
    std::vector<Rule> kept;
    for (const auto& r : family.rules()) {
        const bool dominated = std::any_of(family.rules().begin(), family.rules().end(), [&](const Rule& o) {
            return o.size() < r.size() && o.subset_of(r);
        });
        if (!dominated) kept.push_back(r);
    }
    return UpdateFamily(std::move(kept), family.name());
}

namespace catalog {

namespace {
std::vector<Rule> subsets_of_size_at_least(const std::vector<LatticeVector>& base, std::size_t lo,
                                           std::size_t hi) {
    std::vector<Rule> out;
    const std::size_t n = base.size();
    for (std::size_t k = lo; k <= hi; ++k) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
            std::vector<LatticeVector> r;
            for (std::size_t i = 0; i < n; ++i)
                if (pick[i]) r.push_back(base[i]);
            out.emplace_back(std::move(r));
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return out;
}
}  // namespace

UpdateFamily neighbours(int r) {
    if (r < 1 || r > 4) throw ValidationError("N_r^2 needs 1 <= r <= 4");
    const std::vector<LatticeVector> base{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    return UpdateFamily(subsets_of_size_at_least(base, static_cast<std::size_t>(r), 4),
                        "n" + std::to_string(r) + "2");
}

UpdateFamily duarte() {
    return UpdateFamily({Rule{{0, 1}, {0, -1}}, Rule{{-1, 0}, {0, 1}}, Rule{{-1, 0}, {0, -1}}}, "duarte");
}

UpdateFamily u38() {
    const std::vector<LatticeVector> base{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {2, 0}, {-2, 0}, {0, 2}, {0, -2}};
    return UpdateFamily(subsets_of_size_at_least(base, 3, 3), "u38");
}

UpdateFamily triangle() {
    return UpdateFamily({Rule{{-1, 1}, {-1, -1}}, Rule{{0, 1}, {1, 1}}, Rule{{0, -1}, {1, -1}}}, "triangle");
}

UpdateFamily triangle_fair() {
    auto rules = triangle().rules();
    rules.push_back(Rule{{-1, 2}, {-1, -1}});
    return UpdateFamily(std::move(rules), "triangle_fair");
}

UpdateFamily five_rule() {
    return UpdateFamily({Rule{{1, 0}, {0, -3}, {0, -2}, {0, -1}}, Rule{{2, 0}, {0, 3}, {0, 5}},
                         Rule{{-1, 0}, {0, 1}}, Rule{{-2, 0}, {0, -4}}, Rule{{1, 1}, {0, -1}}},
                        "five_rule");
}

UpdateFamily unit_singletons() {
    return UpdateFamily({Rule{{1, 0}}, Rule{{-1, 0}}, Rule{{0, 1}}, Rule{{0, -1}}}, "singletons");
}

std::vector<std::string> names() {
    return {"duarte", "n12", "n22", "n32", "n42", "u38", "triangle", "triangle_fair", "five_rule", "singletons"};
}

UpdateFamily by_name(const std::string& name) {
    if (name == "duarte") return duarte();
    if (name == "u38") return u38();
    if (name == "triangle") return triangle();
    if (name == "triangle_fair") return triangle_fair();
    if (name == "five_rule") return five_rule();
    if (name == "singletons") return unit_singletons();
    if (name.size() == 3 && name[0] == 'n' && name[2] == '2' && name[1] >= '1' && name[1] <= '4')
        return neighbours(name[1] - '0');
    throw ValidationError("unknown catalog family '" + name + "'");
}

}  // namespace catalog

}  // namespace ufix
