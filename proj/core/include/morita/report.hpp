#pragma once

#include <string>
#include <vector>

namespace morita {

/// One named check in a validation report. `detail` names the first failing
/// identity and the basis indices involved, or says how the check was decided.
struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;

    void add(std::string name, bool passed, std::string detail = {}) {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }
    void merge(const Report& other, const std::string& prefix = {}) {
        for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.passed, c.detail});
    }
    bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const Check* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    bool passed(const std::string& name) const {
        const Check* c = find(name);
        return c != nullptr && c->passed;
    }
};

}  // namespace morita
