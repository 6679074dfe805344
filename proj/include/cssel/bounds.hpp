#ifndef CSSEL_BOUNDS_HPP
#define CSSEL_BOUNDS_HPP

#include <algorithm>
#include <string>
#include <vector>

namespace cssel {

/// One inequality `achieved <= bound`, with the slack used to judge it.
struct BoundCheck {
    std::string name;
    double achieved = 0.0;
    double bound = 0.0;
    double ratio = 0.0;  // achieved / bound (0 when both vanish)
    bool pass = false;

    friend bool operator==(const BoundCheck&, const BoundCheck&) = default;
};

struct BoundReport {
    std::vector<BoundCheck> checks;

    /// pass iff achieved <= bound * (1 + rel_slack) + abs_slack
    const BoundCheck& add(std::string name, double achieved, double bound, double rel_slack = 1e-9,
                          double abs_slack = 0.0) {
        BoundCheck c;
        c.name = std::move(name);
        c.achieved = achieved;
        c.bound = bound;
        c.ratio = bound > 0.0 ? achieved / bound : (achieved > 0.0 ? 1.0 / 0.0 : 0.0);
        c.pass = achieved <= bound * (1.0 + rel_slack) + abs_slack;
        checks.push_back(std::move(c));
        return checks.back();
    }

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
    }

    const BoundCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name)
                return &c;
        return nullptr;
    }

    void append(const BoundReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }

    friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

}  // namespace cssel

#endif
