#include "idsum/detsum.hpp"

#include <cmath>
#include <memory>
#include <mutex>

#include "idsum/enum_kernel.hpp"

namespace idsum {

namespace {

// first suspect-zero point seen; filled under a lock from whichever slice
// hits it, checked after the parallel region so no exception crosses it
struct ViolationBox {
    std::mutex mu;
    bool hit = false;
    std::vector<int32_t> coords;
};

std::string coords_str(const std::vector<int32_t>& c) {
    std::string s = "(";
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(c[i]);
    }
    return s + ")";
}

struct DetTerm {
    const ElementTag* tag = nullptr;
    const Eigen::MatrixXcd* F = nullptr;  // forms x rank when tagged
    const MatrixLattice* L = nullptr;
    int nf = 0;
    int k = 0;
    double m = 0.0;
    int half_m_int = 0;  // m/2 when m is an even integer, else 0
    ViolationBox* viol = nullptr;
    std::vector<std::complex<double>> levels;  // (k+1) x nf incremental forms

    void init(const MatrixLattice& lat, double m_, ViolationBox* v) {
        L = &lat;
        k = lat.rank;
        m = m_;
        viol = v;
        double h = m / 2.0;
        half_m_int = (h == std::floor(h) && h >= 1.0 && h <= 64.0) ? int(h) : 0;
        if (lat.element_tag) {
            tag = lat.element_tag.get();
            F = &tag->forms();
            nf = tag->form_count();
            levels.assign(size_t(k + 1) * nf, std::complex<double>(0, 0));
        }
    }

    int rank() const { return k; }

    void enter(int p, int v) {
        if (!tag) return;
        const std::complex<double>* prev = levels.data() + size_t(p) * nf;
        std::complex<double>* next = levels.data() + size_t(p + 1) * nf;
        const double dv = double(v);
        for (int e = 0; e < nf; ++e) next[e] = prev[e] + dv * (*F)(e, p);
    }

    double term(const int32_t* x, double /*norm2*/, double& absdet) const {
        double q2;
        if (tag)
            q2 = tag->det2(levels.data() + size_t(k) * nf);
        else {
            double ad = std::abs(L->matrix_of(x).determinant());
            q2 = ad * ad;
        }
        absdet = std::sqrt(q2);
        if (absdet <= 1e-12) {
            std::lock_guard<std::mutex> g(viol->mu);
            if (!viol->hit) {
                viol->hit = true;
                viol->coords.assign(x, x + k);
            }
            return 0.0;
        }
        if (half_m_int) {
            double b = 1.0 / q2;
            double r = b;
            for (int i = 1; i < half_m_int; ++i) r *= b;
            return r;
        }
        return std::pow(q2, -0.5 * m);
    }
};

void check_args(double M, double m) {
    if (M <= 0) throw ScopeError("inverse determinant sum needs a positive radius");
    if (m <= 0) throw ScopeError("inverse determinant sum needs a positive exponent m");
}

}  // namespace

DetSumResult inverse_det_sum(const MatrixLattice& L, double M, double m, const EnumOptions& opt) {
    check_args(M, m);
    guard_budget(L, M, opt);
    ViolationBox viol;
    DetTerm proto;
    proto.init(L, m, &viol);
    BallSum bs = sum_over_ball(L.gram, M * M, proto);
    if (viol.hit)
        throw NVDError("vanishing determinant at lattice point " + coords_str(viol.coords) + " of " +
                       L.label + " (|det| <= 1e-12): lattice fails the NVD precondition");
    DetSumResult out;
    out.value = bs.value;
    out.point_count = bs.point_count;
    out.min_abs_det = bs.min_abs_det < 0 ? 0.0 : bs.min_abs_det;
    return out;
}

DetSumResult inverse_det_sum_serial(const MatrixLattice& L, double M, double m, const EnumOptions& opt) {
    check_args(M, m);
    guard_budget(L, M, opt);
    ViolationBox viol;
    struct SerialVisitor {
        DetTerm t;
        Neumaier acc;
        long long count = 0;
        double min_det = -1.0;
        void enter(int p, int v) { t.enter(p, v); }
        void leaf(const int32_t* x, double n2) {
            bool zero = true;
            for (int i = 0; i < t.k; ++i)
                if (x[i]) { zero = false; break; }
            if (zero) return;
            double d = 0.0;
            acc.add(t.term(x, n2, d));
            ++count;
            if (min_det < 0 || d < min_det) min_det = d;
        }
    } sv;
    sv.t.init(L, m, &viol);
    enumerate_full(L.gram, M * M, sv);
    if (viol.hit)
        throw NVDError("vanishing determinant at lattice point " + coords_str(viol.coords) + " of " +
                       L.label + " (|det| <= 1e-12): lattice fails the NVD precondition");
    DetSumResult out;
    out.value = sv.acc.value();
    out.point_count = sv.count;
    out.min_abs_det = sv.min_det < 0 ? 0.0 : sv.min_det;
    return out;
}

DetSumResult normalized_inverse_det_sum(const MatrixLattice& L, double M, double m,
                                        bool legacy_scale_only, const EnumOptions& opt) {
    NormalizationFactor nf = normalization_factor(L, m);
    double radius = legacy_scale_only ? M : M * nf.radius_factor;
    DetSumResult r = inverse_det_sum(L, radius, m, opt);
    r.value *= nf.scale;
    return r;
}

double union_bound(const MatrixLattice& L, double M, int n_r, const EnumOptions& opt) {
    if (n_r < 1) throw ScopeError("union bound needs n_r >= 1");
    return inverse_det_sum(L, 2.0 * M, 2.0 * n_r, opt).value;
}

SumCurve sum_curve(const MatrixLattice& L, const std::vector<double>& radii, double m,
                   bool normalized, bool legacy_scale_only, const EnumOptions& opt) {
    SumCurve c;
    c.label = "S^" + fmt_shortest(m) + "(" + L.label + ")" + (normalized ? " normalized" : "");
    c.exponent_m = m;
    c.normalized = normalized;
    for (double M : radii) {
        DetSumResult r = normalized
                             ? normalized_inverse_det_sum(L, M, m, legacy_scale_only, opt)
                             : inverse_det_sum(L, M, m, opt);
        c.samples.push_back({M, r.value, r.point_count});
    }
    return c;
}

}  // namespace idsum
