#pragma once

#include <cstdint>
#include <vector>

#include "idsum/numberfield.hpp"
#include "idsum/util.hpp"

namespace idsum {

// z[n] = number of integral ideals of O_K with norm exactly n, for 1 <= n <= limit
struct IdealCountTable {
    FieldPtr field;
    int64_t limit = 0;
    std::vector<uint32_t> z;  // index 0 unused

    uint32_t at(int64_t n) const { return z[size_t(n)]; }
};

// multiplicative sieve over prime splitting data; primes where the defining
// polynomial is not squarefree mod p must carry a catalog entry
IdealCountTable ideal_counts(const FieldPtr& K, int64_t M);

struct IdealCountCumulative {
    int64_t count = 0;       // N(K, M) = sum of z(n) for n <= M
    double main_term = 0;    // alpha_K h_K M
    double abs_error = 0;
    double relative_error = 0;  // abs_error / M
};

IdealCountCumulative ideal_count_cumulative(const IdealCountTable& table);
IdealCountCumulative ideal_count_cumulative(const FieldPtr& K, int64_t M);

struct ZetaValue {
    double value = 0;
    // bound on the missing tail for s > 1 (divisor-sum comparison);
    // infinite at s = 1 where the full series diverges
    double tail_bound = 0;
};

// sum of z(n)/n^s over n <= limit; rejects s < 1, no analytic continuation
ZetaValue truncated_zeta(const IdealCountTable& table, double s);
ZetaValue truncated_zeta(const FieldPtr& K, double s, int64_t M);

// split of the truncated zeta at s = 1 into the harmonic main term
// T = alpha_K h_K H_M and the remainder S = zeta_K(1, M) - T, which
// stays bounded as M grows
struct ZetaDecomposition {
    double S_term = 0;
    double T_term = 0;
};

ZetaDecomposition zeta_log_decomposition(const IdealCountTable& table);
ZetaDecomposition zeta_log_decomposition(const FieldPtr& K, int64_t M);

// one pass over the table recording the decomposition at each checkpoint,
// plus the running max of |S_term| over every n up to that checkpoint
struct ZetaSweepPoint {
    int64_t M = 0;
    double zeta1 = 0;  // zeta_K(1, M)
    double S_term = 0;
    double T_term = 0;
    double running_max_abs_s = 0;
};

std::vector<ZetaSweepPoint> zeta_decomposition_sweep(const IdealCountTable& table,
                                                     const std::vector<int64_t>& checkpoints);

}  // namespace idsum
