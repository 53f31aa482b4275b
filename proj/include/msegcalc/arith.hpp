#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msegcalc {

// Half-integer stored as twice its value.
struct HalfInt {
    std::int64_t twice = 0;

    static constexpr HalfInt of(std::int64_t k) { return HalfInt{2 * k}; }
    static constexpr HalfInt halves(std::int64_t k) { return HalfInt{k}; }

    constexpr bool integral() const { return twice % 2 == 0; }
    // Valid only when integral().
    constexpr std::int64_t as_int() const { return twice / 2; }

    constexpr HalfInt operator+(HalfInt o) const { return {twice + o.twice}; }
    constexpr HalfInt operator-(HalfInt o) const { return {twice - o.twice}; }
    constexpr HalfInt operator-() const { return {-twice}; }
    constexpr HalfInt operator+(std::int64_t k) const { return {twice + 2 * k}; }
    constexpr HalfInt operator-(std::int64_t k) const { return {twice - 2 * k}; }
    HalfInt& operator+=(HalfInt o) { twice += o.twice; return *this; }
    HalfInt& operator-=(HalfInt o) { twice -= o.twice; return *this; }

    constexpr auto operator<=>(const HalfInt&) const = default;

    std::string str() const {
        if (integral()) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

inline HalfInt half(std::int64_t num, std::int64_t den = 1) {
    if (den == 1) return HalfInt::of(num);
    if (den == 2) return HalfInt::halves(num);
    throw std::invalid_argument("half: denominator must be 1 or 2");
}

class ModContext {
public:
    // ell: 0, a prime, or nullopt (some odd prime of the given order, only
    // meaningful for finite e > 1). e: nullopt means Infinity.
    ModContext(std::optional<int> ell, std::optional<int> e) {
        if (!e) {
            if (ell && *ell != 0)
                throw std::invalid_argument("e = inf requires ell = 0");
            ell_ = 0;
            inf_ = true;
            return;
        }
        if (*e < 1) throw std::invalid_argument("e must be a positive integer");
        e_ = *e;
        if (!ell) {
            if (e_ == 1) throw std::invalid_argument("e = 1 requires ell");
            ell_ = -1;
            return;
        }
        if (*ell == 0) throw std::invalid_argument("ell = 0 requires e = inf");
        if (!is_prime(*ell)) throw std::invalid_argument("ell must be 0 or a prime");
        if (e_ > 1 && *ell == 2) throw std::invalid_argument("e > 1 forces ell odd");
        if ((*ell - 1) % e_ != 0)
            throw std::invalid_argument("e must divide ell - 1");
        ell_ = *ell;
    }

    static ModContext char_zero() { return ModContext(0, std::nullopt); }
    static ModContext with_e(int e) { return ModContext(std::nullopt, e); }
    static ModContext banal_free(int ell) { return ModContext(ell, 1); }

    bool e_infinite() const { return inf_; }
    int e() const {
        if (inf_) throw std::logic_error("e is infinite");
        return e_;
    }
    // -1 when unspecified.
    int ell() const { return ell_; }
    bool ell_known() const { return ell_ >= 0; }
    int f() const {
        if (inf_) return 0;
        return e_ > 1 ? e_ : ell_;
    }
    bool q_is_one() const { return !inf_ && e_ == 1; }
    bool e_greater_one() const { return inf_ || e_ > 1; }

    std::string str() const {
        std::string s = "ell=";
        s += ell_ < 0 ? std::string("?") : std::to_string(ell_);
        s += ", e=";
        s += inf_ ? std::string("inf") : std::to_string(e_);
        return s;
    }

    bool operator==(const ModContext&) const = default;

private:
    static bool is_prime(int p) {
        if (p < 2) return false;
        for (int d = 2; d * d <= p; ++d)
            if (p % d == 0) return false;
        return true;
    }

    int ell_ = 0;
    int e_ = 0;
    bool inf_ = false;
};

inline bool congruent(HalfInt a, HalfInt b, const ModContext& ctx) {
    HalfInt d = a - b;
    if (ctx.e_infinite()) return d.twice == 0;
    if (!d.integral()) return false;
    return d.as_int() % ctx.e() == 0;
}

inline bool divides_f(int f, int n) {
    if (n < 1) throw std::invalid_argument("divides_f: n must be >= 1");
    return f >= 1 && n % f == 0;
}

// e divides k, with e = inf dividing only 0.
inline bool e_divides(const ModContext& ctx, std::int64_t k) {
    if (ctx.e_infinite()) return k == 0;
    return k % ctx.e() == 0;
}

// Representative of the class of a with -e/2 < r <= e/2, same parity as a.
inline HalfInt reduce(HalfInt a, const ModContext& ctx) {
    if (ctx.e_infinite()) return a;
    std::int64_t p = 2 * static_cast<std::int64_t>(ctx.e());
    std::int64_t r = ((a.twice % p) + p) % p;
    if (r > ctx.e()) r -= p;
    return HalfInt{r};
}

// Sort key of the class of a in [0, e); raw value when e = inf.
inline std::int64_t class_index(HalfInt a, const ModContext& ctx) {
    if (ctx.e_infinite()) return a.twice;
    std::int64_t p = 2 * static_cast<std::int64_t>(ctx.e());
    return ((a.twice % p) + p) % p;
}

struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p) : parts(std::move(p)) {
        for (int x : parts)
            if (x < 1) throw std::invalid_argument("partition parts must be >= 1");
        std::sort(parts.begin(), parts.end(), std::greater<>());
    }

    int total() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    bool operator==(const Partition&) const = default;
    auto operator<=>(const Partition&) const = default;

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts[i]);
        }
        return s + ")";
    }
};

inline bool dominates(const Partition& lam, const Partition& mu) {
    if (lam.total() != mu.total())
        throw std::invalid_argument("dominates: partitions of different integers");
    int sl = 0, sm = 0;
    std::size_t len = std::max(lam.parts.size(), mu.parts.size());
    for (std::size_t k = 0; k < len; ++k) {
        sl += k < lam.parts.size() ? lam.parts[k] : 0;
        sm += k < mu.parts.size() ? mu.parts[k] : 0;
        if (sl < sm) return false;
    }
    return true;
}

inline bool strictly_dominates(const Partition& lam, const Partition& mu) {
    return dominates(lam, mu) && lam != mu;
}

inline void partitions_rec(int n, int maxpart, std::vector<int>& cur,
                           std::vector<Partition>& out) {
    if (n == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int p = std::min(n, maxpart); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(n - p, p, cur, out);
        cur.pop_back();
    }
}

// All partitions of n, lexicographically decreasing.
inline std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    partitions_rec(n, n, cur, out);
    return out;
}

} // namespace msegcalc
