#pragma once

#include <string>
#include <vector>

#include "detsum.hpp"
#include "numberfield.hpp"
#include "qoalgebra.hpp"

namespace idsum {

// least-squares power law value ~ C (log M)^p fitted to a sampled curve
struct GrowthFit {
    double exponent = 0.0;      // p
    double prefactor = 0.0;     // C
    double residual_rms = 0.0;  // rms residual of log(value), never hidden
    std::vector<double> radii_used;
};

// regression of log(value) against log(log M). needs at least 4 samples with
// log M spanning a factor of 2 and all values positive; deterministic
// sequential accumulation, so the fit is bit-identical across runs.
GrowthFit fit_log_power(const SumCurve& curve);

struct GrowthComparison {
    GrowthFit qo_fit;
    GrowthFit nf_fit;
    std::vector<double> ratio_trend;  // nf value / qo value per radius
    bool ratio_increasing = false;    // strictly increasing across the grid
};

// fits an order-code curve against a number-field curve and tracks their
// ratio. both curves must share the radius grid and the exponent m.
GrowthComparison compare_growth(const SumCurve& qo, const SumCurve& nf);

enum class BoundVerdict { pass, fail, skipped };

struct BoundRow {
    double radius = 0.0;
    double measured = 0.0;  // NaN when the enumeration budget skipped this radius
    double lower = 0.0;     // lower main term at this radius
    double upper = 0.0;     // upper main term (or envelope) at this radius
    long long point_count = 0;
    BoundVerdict verdict = BoundVerdict::fail;
    bool pre_asymptotic = false;  // log M < 4, dropped O-terms may still dominate
};

// finite-radius consistency table: measured sums against the growth law's
// main terms. verdicts never claim the asymptotic itself, only that the
// sample sits inside [lower/slack, upper*slack].
struct BoundReport {
    std::string label;       // lattice label of the measured curve
    std::string bound_name;  // growth shape tag, or qo_growth for order codes
    double exponent_m = 0.0;
    double slack = 2.0;
    double lower_coef = 0.0;
    double lower_log_power = 0.0;
    double upper_coef = 0.0;
    double upper_log_power = 0.0;
    std::string upper_note;  // what the upper coefficient stands for
    std::vector<BoundRow> rows;
};

struct BoundOptions {
    double slack = 2.0;       // lower scaled by 1/slack, upper by slack
    double zeta_limit = 1e5;  // truncation point for the zeta factor in the upper term
    EnumOptions enum_opts;
};

// sandwich report for a catalog field: the normalized sum against
// n_tilde (log M)^(n-1) from below and either the zeta form or the explicit
// one-extra-log-power envelope from above. the second argument is the
// exponent m for totally real fields and n_r for totally complex ones.
BoundReport bound_report(const FieldPtr& K, double m_or_nr, const std::vector<double>& radii,
                         const BoundOptions& opt = {});

// same table for a quasi-orthogonal order code: explicit lower main term,
// empirical envelope c_emp (log M)^(k-1) from above. the exact upper
// prefactor involves the Hey zeta of the order and stays symbolic.
BoundReport bound_report(const AlgebraPtr& A, int n_r, const std::vector<double>& radii,
                         const BoundOptions& opt = {});

// e^t for t in {3, 3.5, ..., t_max}, t_max set by what enumeration can reach
// at the given lattice rank on a small machine
std::vector<double> default_radius_grid(int rank);

}  // namespace idsum
