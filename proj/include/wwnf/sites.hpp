#pragma once

#include "wwnf/sqrt_rational.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace wwnf {

/// Ordered tangential sites S = S+ u S- (positive wavenumbers first).
/// k != -j across the split is required by the construction; violations are
/// recorded rather than rejected so genericity checks can report them as a
/// certificate.
class TangentialSet {
public:
    explicit TangentialSet(std::vector<std::int64_t> sites) : sites_(std::move(sites)) {
        if (sites_.empty()) throw std::invalid_argument("TangentialSet: empty");
        std::set<std::int64_t> seen;
        bool negatives_started = false;
        for (auto j : sites_) {
            if (j == 0) throw std::invalid_argument("TangentialSet: zero site");
            if (!seen.insert(j).second)
                throw std::invalid_argument("TangentialSet: duplicate site");
            if (j < 0) negatives_started = true;
            if (j > 0 && negatives_started)
                throw std::invalid_argument("TangentialSet: S+ must precede S-");
        }
        for (auto j : sites_)
            if (j > 0 && seen.count(-j)) bis_violation_ = j;
    }

    int nu() const { return static_cast<int>(sites_.size()); }
    const std::vector<std::int64_t>& sites() const { return sites_; }
    std::int64_t site(int i) const { return sites_[i]; }

    std::int64_t max_abs() const {
        std::int64_t m = 0;
        for (auto j : sites_) m = std::max<std::int64_t>(m, std::llabs(j));
        return m;
    }

    bool contains(std::int64_t j) const {
        return std::find(sites_.begin(), sites_.end(), j) != sites_.end();
    }
    /// position of site j in the ordering, -1 if absent
    int index_of(std::int64_t j) const {
        auto it = std::find(sites_.begin(), sites_.end(), j);
        return it == sites_.end() ? -1 : static_cast<int>(it - sites_.begin());
    }

    /// k = -j violation across S+ x S-, 0 if none
    std::int64_t bis_violation() const { return bis_violation_; }
    bool bis_ok() const { return bis_violation_ == 0; }

    void require_bis() const {
        if (!bis_ok())
            throw std::domain_error("TangentialSet: contains j and -j (site " +
                                    std::to_string(bis_violation_) + ")");
    }

    /// linear frequencies omega_bar_i = sqrt|site_i|
    std::vector<double> omega_bar() const {
        std::vector<double> w;
        w.reserve(sites_.size());
        for (auto j : sites_) w.push_back(std::sqrt(double(std::llabs(j))));
        return w;
    }
    SqrtRational omega_bar_exact(int i) const {
        return SqrtRational::sqrt_of(std::llabs(sites_[i]));
    }

    /// velocity vector v_i = site_i
    std::vector<std::int64_t> velocity() const { return sites_; }

    /// w_i = |site_i| * site_i
    std::vector<std::int64_t> w_vector() const {
        std::vector<std::int64_t> w;
        w.reserve(sites_.size());
        for (auto j : sites_) w.push_back(std::llabs(j) * j);
        return w;
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < sites_.size(); ++i)
            s += (i ? "," : "") + std::to_string(sites_[i]);
        return s + "}";
    }

private:
    std::vector<std::int64_t> sites_;
    std::int64_t bis_violation_ = 0;
};

} // namespace wwnf
