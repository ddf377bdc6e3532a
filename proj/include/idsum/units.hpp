#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idsum/detsum.hpp"
#include "idsum/numberfield.hpp"

namespace idsum {

// every unit u = zeta * prod eps_i^{k_i} with ||psi(u)||_F <= M; the
// exponent box comes from the logarithmic embedding, the membership test
// is exact field arithmetic (u * u^{-1} == 1 over the rationals)
std::vector<FieldElement> enumerate_units_in_ball(const FieldPtr& K, double M);

struct UnitBallCount {
    FieldPtr field;
    double radius = 0;
    int64_t count = 0;
    double predicted = 0;  // N_K (log M)^(n-1)
    std::vector<FieldElement> units;  // populated only when requested
    std::string caveat;  // set when the catalog units may span a finite-index subgroup
};

UnitBallCount unit_ball_count(const FieldPtr& K, double M, bool keep_units = false);

// counts per radius as a SumCurve (value = count); radii must be
// increasing and each at least e so the log-power prediction applies
SumCurve unit_count_curve(const FieldPtr& K, const std::vector<double>& radii);

}  // namespace idsum
