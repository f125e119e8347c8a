#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oht {

// Decision of any test: a non-empty sorted outlier index set, or the
// declaration that no outlier exists.
class Hypothesis {
  public:
    static Hypothesis no_outlier() { return Hypothesis(); }

    static Hypothesis outlier_set(std::vector<std::uint32_t> indices) {
        if (indices.empty()) throw std::invalid_argument("Hypothesis: empty outlier set");
        std::sort(indices.begin(), indices.end());
        if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
            throw std::invalid_argument("Hypothesis: duplicate outlier index");
        Hypothesis h;
        h.outliers_ = std::move(indices);
        return h;
    }

    bool is_no_outlier() const { return outliers_.empty(); }
    const std::vector<std::uint32_t>& outliers() const { return outliers_; }

    bool operator==(const Hypothesis& other) const { return outliers_ == other.outliers_; }

    std::string str() const {
        if (is_no_outlier()) return "H_r";
        std::string s = "{";
        for (std::size_t i = 0; i < outliers_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(outliers_[i]);
        }
        return s + "}";
    }

  private:
    Hypothesis() = default;
    std::vector<std::uint32_t> outliers_;  // empty iff no-outlier
};

}  // namespace oht
