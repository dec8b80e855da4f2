#pragma once

#include <string>
#include <vector>

namespace lspline {

inline constexpr const char* kLibraryVersion = "1.0.0";

/// One measured quantity with the threshold it was judged against.
struct CheckItem {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct Report {
    std::string title;
    std::vector<CheckItem> items;

    bool passed() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
    void add(std::string name, double value, double threshold) {
        items.push_back({std::move(name), value, threshold, value <= threshold});
    }
    /// For strictly-positive requirements (value must exceed the bound).
    void add_lower(std::string name, double value, double bound) {
        items.push_back({std::move(name), value, bound, value > bound});
    }
    const CheckItem* find(const std::string& name) const {
        for (const auto& it : items)
            if (it.name == name) return &it;
        return nullptr;
    }
};

}  // namespace lspline
