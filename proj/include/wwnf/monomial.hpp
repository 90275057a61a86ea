#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace wwnf {

/// One Fourier factor u_j^sigma. sigma = +1 is u_j, sigma = -1 the conjugate.
struct Mode {
    std::int32_t j;
    std::int32_t sigma;

    friend bool operator==(const Mode& a, const Mode& b) {
        return a.j == b.j && a.sigma == b.sigma;
    }
    friend bool operator<(const Mode& a, const Mode& b) {
        if (a.j != b.j) return a.j < b.j;
        return a.sigma < b.sigma;
    }
};

/// Canonically sorted product of Modes. Capacity 8 covers everything the
/// degree-4 pipelines produce (brackets of two quartics reach degree 6).
class Monomial {
public:
    static constexpr int kCapacity = 8;

    Monomial() = default;

    template <class It>
    Monomial(It first, It last) {
        for (It it = first; it != last; ++it) push(*it);
        canonicalize();
    }

    Monomial(std::initializer_list<Mode> ms) : Monomial(ms.begin(), ms.end()) {}

    void push(const Mode& m) {
        if (m.j == 0) throw std::domain_error("Monomial: zero wavenumber");
        if (n_ == kCapacity) throw std::length_error("Monomial: capacity exceeded");
        modes_[n_++] = m;
    }

    void canonicalize() { std::sort(modes_.begin(), modes_.begin() + n_); }

    int degree() const { return n_; }
    const Mode& operator[](int i) const { return modes_[i]; }
    const Mode* begin() const { return modes_.data(); }
    const Mode* end() const { return modes_.data() + n_; }

    /// sum sigma_i j_i, exact
    std::int64_t momentum() const {
        std::int64_t m = 0;
        for (int i = 0; i < n_; ++i) m += std::int64_t(modes_[i].sigma) * modes_[i].j;
        return m;
    }

    /// all sigmas flipped (the complex-conjugate monomial)
    Monomial conjugate() const {
        Monomial r;
        for (int i = 0; i < n_; ++i) r.push({modes_[i].j, -modes_[i].sigma});
        r.canonicalize();
        return r;
    }

    /// product monomial (merge of two sorted mode lists)
    static Monomial merged(const Monomial& a, const Monomial& b) {
        Monomial r;
        int i = 0, k = 0;
        while (i < a.n_ || k < b.n_) {
            if (k == b.n_ || (i < a.n_ && a.modes_[i] < b.modes_[k]))
                r.push(a.modes_[i++]);
            else
                r.push(b.modes_[k++]);
        }
        return r;
    }

    /// copy with the mode at position pos removed (order preserved)
    Monomial without(int pos) const {
        Monomial r;
        for (int i = 0; i < n_; ++i)
            if (i != pos) r.push(modes_[i]);
        return r;
    }

    int count(const Mode& m) const {
        int c = 0;
        for (int i = 0; i < n_; ++i)
            if (modes_[i] == m) ++c;
        return c;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        if (a.n_ != b.n_) return false;
        for (int i = 0; i < a.n_; ++i)
            if (!(a.modes_[i] == b.modes_[i])) return false;
        return true;
    }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        for (int i = 0; i < a.n_; ++i) {
            if (a.modes_[i] < b.modes_[i]) return true;
            if (b.modes_[i] < a.modes_[i]) return false;
        }
        return false;
    }

    std::size_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (int i = 0; i < n_; ++i) {
            std::uint64_t k =
                (std::uint64_t(std::uint32_t(modes_[i].j)) << 1) | (modes_[i].sigma > 0);
            h ^= k;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h ^ std::uint64_t(n_) << 56);
    }

    std::string str() const {
        std::string s;
        for (int i = 0; i < n_; ++i) {
            if (!s.empty()) s += "*";
            s += (modes_[i].sigma > 0 ? "u(" : "ub(") + std::to_string(modes_[i].j) + ")";
        }
        return s.empty() ? "1" : s;
    }

private:
    std::array<Mode, kCapacity> modes_{};
    int n_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

} // namespace wwnf
