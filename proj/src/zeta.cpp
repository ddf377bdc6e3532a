#include "idsum/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace idsum {

namespace {

constexpr int64_t kTableLimit = 10000000;
constexpr double kEulerGamma = 0.5772156649015329;

// dense polynomials over F_p, ascending coefficients, no high zero padding
using Poly = std::vector<uint64_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return int(a.size()) - 1; }

uint64_t powmod(uint64_t b, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

// product reduced mod the monic modulus f
Poly mulmod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    const int df = degree(f);
    for (int i = int(c.size()) - 1; i >= df; --i) {
        uint64_t q = c[size_t(i)];
        if (!q) continue;
        c[size_t(i)] = 0;
        for (int j = 0; j < df; ++j) {
            uint64_t sub = q * f[size_t(j)] % p;
            size_t k = size_t(i - df + j);
            c[k] = (c[k] + p - sub) % p;
        }
    }
    c.resize(size_t(df));
    trim(c);
    return c;
}

Poly powmod_poly(Poly base, uint64_t e, const Poly& f, uint64_t p) {
    Poly r = {1 % p};
    trim(r);
    while (e) {
        if (e & 1) r = mulmod(r, base, f, p);
        base = mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    while (!b.empty()) {
        // remainder of a by b, b made monic first
        uint64_t inv = powmod(b.back(), p - 2, p);
        for (auto& c : b) c = c * inv % p;
        while (degree(a) >= degree(b)) {
            uint64_t q = a.back();
            if (q) {
                int shift = degree(a) - degree(b);
                for (size_t j = 0; j < b.size(); ++j) {
                    size_t k = size_t(shift) + j;
                    a[k] = (a[k] + p - q * b[j] % p) % p;
                }
            }
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        uint64_t inv = powmod(a.back(), p - 2, p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

// exact division by a monic divisor
Poly poly_divexact(Poly a, const Poly& b, uint64_t p) {
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    while (degree(a) >= degree(b) && !a.empty()) {
        uint64_t c = a.back();
        int shift = degree(a) - degree(b);
        q[size_t(shift)] = c;
        for (size_t j = 0; j < b.size(); ++j) {
            size_t k = size_t(shift) + j;
            a[k] = (a[k] + p - c * b[j] % p) % p;
        }
        trim(a);
    }
    trim(q);
    return q;
}

// residue degrees of the primes above p when the defining polynomial is
// squarefree mod p; need_all=false stops after counting the linear factors
struct SplitType {
    std::vector<int> degrees;
    int linear = 0;
    bool squarefree = true;
};

SplitType splitting_mod_p(const std::vector<int64_t>& fint, uint64_t p, bool need_all) {
    Poly f(fint.size());
    for (size_t i = 0; i < fint.size(); ++i) {
        int64_t c = fint[i] % int64_t(p);
        if (c < 0) c += int64_t(p);
        f[i] = uint64_t(c);
    }
    // the modulus must keep full degree; the catalog ships monic polynomials
    SplitType out;
    Poly df(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) df[i - 1] = f[i] * (i % p) % p;
    trim(df);
    Poly g0 = poly_gcd(f, df, p);
    if (degree(g0) > 0) {
        out.squarefree = false;
        return out;
    }
    Poly fr = f;
    Poly xp = {0, 1};  // x, iterated to x^(p^d) below
    for (int d = 1; degree(fr) > 0; ++d) {
        if (!need_all && d > 1) break;
        if (2 * d > degree(fr)) {
            out.degrees.push_back(degree(fr));
            if (degree(fr) == 1) ++out.linear;
            break;
        }
        xp = powmod_poly(xp, p, fr, p);
        Poly diff = xp;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        Poly g = poly_gcd(diff, fr, p);
        if (degree(g) > 0) {
            int count = degree(g) / d;
            for (int i = 0; i < count; ++i) out.degrees.push_back(d);
            if (d == 1) out.linear = count;
            fr = poly_divexact(fr, g, p);
            if (degree(fr) > 0) xp = mulmod(xp, {1}, fr, p);
        }
    }
    return out;
}

// number of ideal-norm valuation patterns: solutions of sum e_i f_i = a
std::vector<uint32_t> local_counts(const std::vector<int>& degrees, int amax) {
    std::vector<uint32_t> dp(size_t(amax) + 1, 0);
    dp[0] = 1;
    for (int f : degrees)
        for (int a = f; a <= amax; ++a) dp[size_t(a)] += dp[size_t(a - f)];
    return dp;
}

}  // namespace

IdealCountTable ideal_counts(const FieldPtr& K, int64_t M) {
    if (M < 1) throw ScopeError("ideal counts need a positive limit");
    if (M > kTableLimit)
        throw BudgetError("ideal table limit " + std::to_string(M) + " exceeds the dense-array cap " +
                          std::to_string(kTableLimit));
    IdealCountTable t;
    t.field = K;
    t.limit = M;
    t.z.assign(size_t(M) + 1, 0);
    t.z[0] = 0;
    if (M >= 1) t.z[1] = 1;
    if (M == 1) return t;

    const std::vector<int64_t>& fint = K->defining_polynomial;
    std::map<int64_t, std::vector<int>> special;
    for (const auto& [p, degs] : K->special_primes) special[p] = degs;

    // smallest prime factor sieve
    std::vector<int32_t> spf(size_t(M) + 1, 0);
    for (int64_t i = 2; i <= M; ++i) {
        if (spf[size_t(i)] == 0) {
            for (int64_t j = i; j <= M; j += i)
                if (spf[size_t(j)] == 0) spf[size_t(j)] = int32_t(i);
        }
    }

    // per-prime local data: number of linear factors for every prime (enough
    // for p > sqrt(M), where only exponent 1 can occur), full prime-power
    // tables for the small primes
    std::vector<uint8_t> b1(size_t(M) + 1, 0);
    std::map<int64_t, std::vector<uint32_t>> full;
    for (int64_t p = 2; p <= M; ++p) {
        if (spf[size_t(p)] != int32_t(p)) continue;
        const bool small = p * p <= M;
        std::vector<int> degrees;
        auto it = special.find(p);
        if (it != special.end()) {
            degrees = it->second;
        } else {
            SplitType st = splitting_mod_p(fint, uint64_t(p), small);
            if (!st.squarefree)
                throw ScopeError("catalog incomplete for " + K->name + ": defining polynomial is not squarefree mod " +
                                 std::to_string(p) + " and the prime has no catalog splitting entry");
            if (!small) {
                b1[size_t(p)] = uint8_t(st.linear);
                continue;
            }
            degrees = st.degrees;
        }
        int linear = 0;
        for (int f : degrees)
            if (f == 1) ++linear;
        b1[size_t(p)] = uint8_t(linear);
        if (small) {
            int amax = 0;
            int64_t pk = 1;
            while (pk <= M / p) {
                pk *= p;
                ++amax;
            }
            full[p] = local_counts(degrees, amax);
        }
    }

    for (int64_t n = 2; n <= M; ++n) {
        int64_t p = spf[size_t(n)];
        int64_t rest = n;
        int a = 0;
        while (rest % p == 0) {
            rest /= p;
            ++a;
        }
        uint32_t local = a == 1 ? b1[size_t(p)] : full[p][size_t(a)];
        t.z[size_t(n)] = t.z[size_t(rest)] * local;
    }
    return t;
}

IdealCountCumulative ideal_count_cumulative(const IdealCountTable& table) {
    IdealCountCumulative out;
    for (int64_t n = 1; n <= table.limit; ++n) out.count += table.at(n);
    out.main_term = residue_constant(table.field).alpha_h * double(table.limit);
    out.abs_error = std::abs(double(out.count) - out.main_term);
    out.relative_error = out.abs_error / double(table.limit);
    return out;
}

IdealCountCumulative ideal_count_cumulative(const FieldPtr& K, int64_t M) {
    return ideal_count_cumulative(ideal_counts(K, M));
}

ZetaValue truncated_zeta(const IdealCountTable& table, double s) {
    if (s < 1.0) throw ScopeError("truncated zeta rejects s < 1: no analytic continuation");
    ZetaValue out;
    Neumaier acc;
    for (int64_t n = 1; n <= table.limit; ++n) {
        uint32_t zn = table.at(n);
        if (zn) acc.add(double(zn) * std::pow(double(n), -s));
    }
    out.value = acc.value();
    if (s > 1.0) {
        const double M = double(table.limit);
        const double sm1 = s - 1.0;
        const double scale = std::pow(M, -sm1);
        out.tail_bound = double(table.field->degree) *
                         ((std::log(M) + 2.0 * kEulerGamma) / sm1 + 1.0 / (sm1 * sm1)) * scale;
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
    }
    return out;
}

ZetaValue truncated_zeta(const FieldPtr& K, double s, int64_t M) {
    return truncated_zeta(ideal_counts(K, M), s);
}

ZetaDecomposition zeta_log_decomposition(const IdealCountTable& table) {
    const double ah = residue_constant(table.field).alpha_h;
    ZetaDecomposition out;
    Neumaier s_acc, h_acc;
    for (int64_t n = 1; n <= table.limit; ++n) {
        double inv = 1.0 / double(n);
        s_acc.add((double(table.at(n)) - ah) * inv);
        h_acc.add(inv);
    }
    out.S_term = s_acc.value();
    out.T_term = ah * h_acc.value();
    return out;
}

ZetaDecomposition zeta_log_decomposition(const FieldPtr& K, int64_t M) {
    return zeta_log_decomposition(ideal_counts(K, M));
}

std::vector<ZetaSweepPoint> zeta_decomposition_sweep(const IdealCountTable& table,
                                                     const std::vector<int64_t>& checkpoints) {
    std::vector<int64_t> cps = checkpoints;
    std::sort(cps.begin(), cps.end());
    for (int64_t c : cps)
        if (c < 1 || c > table.limit)
            throw ScopeError("sweep checkpoint " + std::to_string(c) + " is outside the table range");
    const double ah = residue_constant(table.field).alpha_h;
    std::vector<ZetaSweepPoint> out;
    out.reserve(cps.size());
    Neumaier s_acc, h_acc;
    double max_abs_s = 0;
    size_t next = 0;
    for (int64_t n = 1; n <= table.limit && next < cps.size(); ++n) {
        double inv = 1.0 / double(n);
        s_acc.add((double(table.at(n)) - ah) * inv);
        h_acc.add(inv);
        max_abs_s = std::max(max_abs_s, std::abs(s_acc.value()));
        while (next < cps.size() && cps[next] == n) {
            ZetaSweepPoint pt;
            pt.M = n;
            pt.S_term = s_acc.value();
            pt.T_term = ah * h_acc.value();
            pt.zeta1 = pt.S_term + pt.T_term;
            pt.running_max_abs_s = max_abs_s;
            out.push_back(pt);
            ++next;
        }
    }
    return out;
}

}  // namespace idsum
