#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace idsum {

using int128 = __int128;

// all exact arithmetic in this project runs on 64-bit numerators/denominators
// with 128-bit intermediates; anything wider throws instead of wrapping.
inline int64_t check_narrow(int128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error("exact arithmetic overflow (value exceeds 64 bits)");
    return static_cast<int64_t>(v);
}

inline int64_t mul_check(int64_t a, int64_t b) { return check_narrow(int128(a) * b); }
inline int64_t add_check(int64_t a, int64_t b) { return check_narrow(int128(a) + b); }

// reduced fraction, denominator always positive
struct Rat {
    int64_t num = 0;
    int64_t den = 1;

    Rat() = default;
    Rat(int64_t n) : num(n), den(1) {}
    Rat(int64_t n, int64_t d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        int128 nn = n, dd = d;
        if (dd < 0) { nn = -nn; dd = -dd; }
        int128 g = gcd128(nn < 0 ? -nn : nn, dd);
        if (g > 1) { nn /= g; dd /= g; }
        num = check_narrow(nn);
        den = check_narrow(dd);
    }

    static Rat raw128(int128 n, int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat r;
        r.num = check_narrow(n);
        r.den = check_narrow(d);
        return r;
    }

    static int128 gcd128(int128 a, int128 b) {
        while (b) { int128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }

    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }

    Rat operator+(const Rat& o) const { return raw128(int128(num) * o.den + int128(o.num) * den, int128(den) * o.den); }
    Rat operator-(const Rat& o) const { return raw128(int128(num) * o.den - int128(o.num) * den, int128(den) * o.den); }
    Rat operator*(const Rat& o) const { return raw128(int128(num) * o.num, int128(den) * o.den); }
    Rat operator/(const Rat& o) const {
        if (o.num == 0) throw std::domain_error("rational division by zero");
        return raw128(int128(num) * o.den, int128(den) * o.num);
    }
    Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const { return int128(num) * o.den < int128(o.num) * den; }

    double to_double() const { return double(num) / double(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    // accepts "a" or "a/b"
    static Rat parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
};

// fraction-free determinant of an integer matrix (Bareiss), 128-bit intermediates.
// throws on overflow rather than returning a wrapped value.
inline int128 bareiss_det(std::vector<std::vector<int128>> a) {
    const size_t n = a.size();
    if (n == 0) return 1;
    auto mul128_check = [](int128 x, int128 y) -> int128 {
        if (x == 0 || y == 0) return 0;
        int128 r = x * y;
        if (r / y != x) throw std::overflow_error("determinant overflow (exceeds 128 bits)");
        return r;
    };
    int sign = 1;
    int128 prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                a[i][j] = (mul128_check(a[i][j], a[k][k]) - mul128_check(a[i][k], a[k][j])) / prev;
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

// determinant of a rational matrix: clear denominators per row, then Bareiss
inline Rat rat_det(const std::vector<std::vector<Rat>>& m) {
    const size_t n = m.size();
    if (n == 0) return Rat(1);
    std::vector<std::vector<int128>> a(n, std::vector<int128>(n));
    int128 denden = 1;
    for (size_t i = 0; i < n; ++i) {
        int64_t l = 1;
        for (size_t j = 0; j < n; ++j) l = check_narrow(int128(l) / Rat::gcd128(l, m[i][j].den) * m[i][j].den);
        for (size_t j = 0; j < n; ++j) a[i][j] = int128(m[i][j].num) * (l / m[i][j].den);
        int128 nd = denden * l;
        if (nd / l != denden) throw std::overflow_error("determinant scale overflow");
        denden = nd;
    }
    int128 det = bareiss_det(std::move(a));
    return Rat::raw128(det, denden);
}

// solve a x = b for square rational a by gaussian elimination (small systems only)
inline std::vector<Rat> rat_solve(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
    const size_t n = a.size();
    for (size_t k = 0; k < n; ++k) {
        size_t p = k;
        while (p < n && a[p][k].is_zero()) ++p;
        if (p == n) throw std::domain_error("singular system");
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        Rat inv = Rat(1) / a[k][k];
        for (size_t j = k; j < n; ++j) a[k][j] *= inv;
        b[k] *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == k || a[i][k].is_zero()) continue;
            Rat f = a[i][k];
            for (size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    return b;
}

inline std::vector<std::vector<Rat>> rat_inverse(const std::vector<std::vector<Rat>>& a) {
    const size_t n = a.size();
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
    for (size_t c = 0; c < n; ++c) {
        std::vector<Rat> e(n);
        e[c] = Rat(1);
        auto col = rat_solve(a, e);
        for (size_t r = 0; r < n; ++r) inv[r][c] = col[r];
    }
    return inv;
}

}  // namespace idsum
