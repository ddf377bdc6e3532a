#include "idsum/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "idsum/lattice.hpp"
#include "idsum/zeta.hpp"

namespace idsum {

namespace {

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void check_fit_preconditions(const SumCurve& curve) {
    if (curve.samples.size() < 4)
        throw ScopeError("log-power fit needs at least 4 samples, curve " + curve.label + " has " +
                         std::to_string(curve.samples.size()));
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const SumSample& s : curve.samples) {
        if (!(s.radius > 1.0))
            throw ScopeError("log-power fit needs radii above 1 so log M stays positive, curve " +
                             curve.label + " has radius " + fmt_g(s.radius));
        if (!(s.value > 0.0))
            throw ScopeError("log-power fit needs positive values, curve " + curve.label +
                             " has value " + fmt_g(s.value) + " at radius " + fmt_g(s.radius));
        lo = std::min(lo, std::log(s.radius));
        hi = std::max(hi, std::log(s.radius));
    }
    if (hi < 2.0 * lo * (1.0 - 1e-12))
        throw ScopeError("log-power fit needs log M to span a factor of 2, curve " + curve.label +
                         " spans only a factor " + fmt_g(hi / lo));
}

void check_report_radii(const std::vector<double>& radii) {
    if (radii.empty()) throw ScopeError("bound report needs a nonempty radius grid");
    double prev = 0.0;
    for (double r : radii) {
        if (r < std::exp(1.0) - 1e-12)
            throw ScopeError("bound report radii must each be at least e, got " + fmt_g(r));
        if (r <= prev) throw ScopeError("bound report radii must be strictly increasing");
        prev = r;
    }
}

void check_slack(double slack) {
    if (!(slack >= 1.0))
        throw ScopeError("bound report slack must be at least 1, got " + fmt_g(slack));
}

BoundVerdict judge(double measured, double lower, double upper, double slack) {
    return (measured >= lower / slack && measured <= upper * slack) ? BoundVerdict::pass
                                                                    : BoundVerdict::fail;
}

}  // namespace

GrowthFit fit_log_power(const SumCurve& curve) {
    check_fit_preconditions(curve);
    GrowthFit fit;
    const size_t cnt = curve.samples.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(cnt), ys(cnt);
    for (size_t i = 0; i < cnt; ++i) {
        xs[i] = std::log(std::log(curve.samples[i].radius));
        ys[i] = std::log(curve.samples[i].value);
        fit.radii_used.push_back(curve.samples[i].radius);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / double(cnt), my = sy / double(cnt);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < cnt; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    double rss = 0.0;
    for (size_t i = 0; i < cnt; ++i) {
        const double res = ys[i] - (intercept + fit.exponent * xs[i]);
        rss += res * res;
    }
    fit.residual_rms = std::sqrt(rss / double(cnt));
    return fit;
}

GrowthComparison compare_growth(const SumCurve& qo, const SumCurve& nf) {
    if (qo.samples.size() != nf.samples.size())
        throw ScopeError("growth comparison needs matching radius grids: " +
                         std::to_string(qo.samples.size()) + " vs " +
                         std::to_string(nf.samples.size()) + " samples");
    for (size_t i = 0; i < qo.samples.size(); ++i) {
        const double a = qo.samples[i].radius, b = nf.samples[i].radius;
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
            throw ScopeError("growth comparison needs matching radius grids, radii diverge at index " +
                             std::to_string(i));
    }
    if (qo.exponent_m != nf.exponent_m)
        throw ScopeError("growth comparison needs the same exponent on both curves: m=" +
                         fmt_g(qo.exponent_m) + " vs m=" + fmt_g(nf.exponent_m));
    GrowthComparison cmp;
    cmp.qo_fit = fit_log_power(qo);
    cmp.nf_fit = fit_log_power(nf);
    cmp.ratio_increasing = true;
    for (size_t i = 0; i < qo.samples.size(); ++i) {
        cmp.ratio_trend.push_back(nf.samples[i].value / qo.samples[i].value);
        if (i > 0 && !(cmp.ratio_trend[i] > cmp.ratio_trend[i - 1])) cmp.ratio_increasing = false;
    }
    return cmp;
}

BoundReport bound_report(const FieldPtr& K, double m_or_nr, const std::vector<double>& radii,
                         const BoundOptions& opt) {
    check_slack(opt.slack);
    check_report_radii(radii);
    double m = m_or_nr;
    int nr = 0;
    if (K->totally_complex) {
        if (!(m_or_nr >= 1.0) || m_or_nr != std::floor(m_or_nr))
            throw ScopeError("totally complex bound reports take a positive integer n_r, got " +
                             fmt_g(m_or_nr));
        nr = int(m_or_nr);
        m = 2.0 * nr;
    }
    // rejects mixed signatures and m < 1 with its own diagnostics
    const BoundConstants bc = normalized_bound_constants(K, m);
    const int n = K->matrix_size();
    const MatrixLattice L = canonical_embedding_lattice(K);

    BoundReport rep;
    rep.label = L.label;
    rep.bound_name = bc.tag;
    rep.exponent_m = m;
    rep.slack = opt.slack;
    rep.lower_coef = bc.n_tilde;
    rep.lower_log_power = double(n - 1);
    if (bc.c_k > 0.0) {
        // boundary exponent: the zeta factor diverges, the envelope pays one
        // extra power of log M instead
        rep.upper_coef = bc.c_k;
        rep.upper_log_power = double(n);
        rep.upper_note = "explicit envelope constant, one extra log power";
    } else {
        const double s = K->totally_complex ? double(nr) : m;
        const IdealCountTable table = ideal_counts(K, opt.zeta_limit);
        const ZetaValue zeta = truncated_zeta(table, s);
        rep.upper_coef = bc.n_tilde * K->class_number * zeta.value;
        rep.upper_log_power = double(n - 1);
        rep.upper_note = "N~ h zeta_K(" + fmt_g(s) + "), zeta truncated at " + fmt_g(opt.zeta_limit) +
                         " with tail bound " + fmt_g(zeta.tail_bound);
    }

    for (double r : radii) {
        BoundRow row;
        row.radius = r;
        row.pre_asymptotic = std::log(r) < 4.0;
        row.lower = rep.lower_coef * std::pow(std::log(r), rep.lower_log_power);
        row.upper = rep.upper_coef * std::pow(std::log(r), rep.upper_log_power);
        try {
            const DetSumResult res = normalized_inverse_det_sum(L, r, m, false, opt.enum_opts);
            row.measured = res.value;
            row.point_count = res.point_count;
            row.verdict = judge(row.measured, row.lower, row.upper, opt.slack);
        } catch (const BudgetError&) {
            row.measured = std::numeric_limits<double>::quiet_NaN();
            row.verdict = BoundVerdict::skipped;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

BoundReport bound_report(const AlgebraPtr& A, int n_r, const std::vector<double>& radii,
                         const BoundOptions& opt) {
    check_slack(opt.slack);
    check_report_radii(radii);
    if (n_r < 1) throw ScopeError("order-code bound reports need n_r >= 1, got " + std::to_string(n_r));
    const int k = A->k();
    const FieldPtr& K = A->K;
    const MatrixLattice L = order_lattice(A);

    BoundReport rep;
    rep.label = L.label;
    rep.bound_name = "qo_growth";
    rep.exponent_m = 2.0 * n_r;
    rep.slack = opt.slack;
    rep.lower_coef = K->roots_of_unity * std::pow(double(k), k - 1) /
                     (K->regulator * std::tgamma(double(k)));
    rep.lower_log_power = double(k - 1);
    rep.upper_log_power = double(k - 1);
    rep.upper_note = "empirical envelope over the sampled radii; the exact prefactor "
                     "zeta_Lambda(" + std::to_string(n_r) + ") [Lambda^* : O_K^*] stays symbolic";

    for (double r : radii) {
        BoundRow row;
        row.radius = r;
        row.pre_asymptotic = std::log(r) < 4.0;
        row.lower = rep.lower_coef * std::pow(std::log(r), rep.lower_log_power);
        try {
            const DetSumResult res = inverse_det_sum(L, r, 2.0 * n_r, opt.enum_opts);
            row.measured = res.value;
            row.point_count = res.point_count;
        } catch (const BudgetError&) {
            row.measured = std::numeric_limits<double>::quiet_NaN();
            row.verdict = BoundVerdict::skipped;
        }
        rep.rows.push_back(row);
    }

    // envelope prefactor from whatever was measured; NaN when every radius
    // blew the budget
    double c_emp = std::numeric_limits<double>::quiet_NaN();
    for (const BoundRow& row : rep.rows) {
        if (row.verdict == BoundVerdict::skipped) continue;
        const double q = row.measured / std::pow(std::log(row.radius), rep.upper_log_power);
        if (!(q <= c_emp)) c_emp = q;
    }
    rep.upper_coef = c_emp;
    for (BoundRow& row : rep.rows) {
        if (row.verdict == BoundVerdict::skipped) continue;
        row.upper = rep.upper_coef * std::pow(std::log(row.radius), rep.upper_log_power);
        row.verdict = judge(row.measured, row.lower, row.upper, opt.slack);
    }
    return rep;
}

std::vector<double> default_radius_grid(int rank) {
    if (rank < 1) throw ScopeError("radius grid needs a positive lattice rank");
    // reachable t_max collapses quickly with rank: ball point counts scale
    // like e^(t rank)
    const double t_max = rank <= 2 ? 10.0 : rank <= 4 ? 5.0 : 4.5;
    std::vector<double> out;
    for (double t = 3.0; t <= t_max + 1e-9; t += 0.5) out.push_back(std::exp(t));
    return out;
}

}  // namespace idsum
