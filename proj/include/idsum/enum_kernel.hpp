#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace idsum {

// Lattice-ball enumeration on a Gram matrix.
//
// The quadratic form is factored as G = F^T F with F lower triangular
// (a reversed-index Cholesky), so coordinate 0 has an unconditional range
// and is assigned first. Points therefore stream in lexicographic order
// of the coordinate vector, each coordinate ascending. The half-space
// walk keeps only vectors whose first nonzero coordinate is positive and
// weights every survivor by 2; combined with per-slice compensated
// accumulators merged in ascending slice order this makes the parallel
// sum bit-identical for any thread count.

// boundary slack: a point is in the ball of squared radius r2 when
// norm2 <= r2 + ENUM_EDGE_TOL*(1+r2)
inline constexpr double ENUM_EDGE_TOL = 1e-9;

struct EnumLadder {
    int k = 0;
    std::vector<double> F;  // k*k row-major, lower triangular

    double at(int p, int q) const { return F[size_t(p) * k + q]; }

    // G = F^T F with F lower triangular: run Cholesky on the index-reversed
    // Gram matrix and anti-transpose the factor back
    static EnumLadder build(const Eigen::MatrixXd& gram) {
        const int k = int(gram.rows());
        Eigen::MatrixXd rev(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) rev(i, j) = gram(k - 1 - i, k - 1 - j);
        Eigen::LLT<Eigen::MatrixXd> llt(rev);
        if (llt.info() != Eigen::Success)
            throw ScopeError("gram matrix is not positive definite");
        Eigen::MatrixXd L = llt.matrixL();
        EnumLadder lad;
        lad.k = k;
        lad.F.assign(size_t(k) * k, 0.0);
        for (int p = 0; p < k; ++p)
            for (int q = 0; q <= p; ++q) lad.F[size_t(p) * k + q] = L(k - 1 - q, k - 1 - p);
        return lad;
    }
};

// expected number of lattice points in the ball (gaussian heuristic):
// vol(ball_k(r)) / covolume
inline double ball_point_estimate(int k, double radius, double covolume) {
    double vball = std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0) * std::pow(radius, k);
    return vball / covolume;
}

// a visitor sees every coordinate as it is fixed (outermost first) and
// every completed point; enter() lets it maintain incremental per-level
// state such as the linear forms a determinant is assembled from.
struct EnumSink {
    void enter(int /*pos*/, int /*value*/) {}
    void leaf(const int32_t* /*coords*/, double /*norm2*/) {}
};

namespace detail {

template <class V>
struct EnumWalk {
    const EnumLadder& lad;
    double r2;
    double tol;
    V& vis;
    std::vector<int32_t> x;
    std::vector<double> s;      // s[p] = sum_{q<fixed} F[p][q] x_q, maintained per level
    std::vector<double> used;   // used[p] = squared norm consumed by coords < p
    std::vector<double> slevel; // snapshots of s, (k+1) rows of k entries

    EnumWalk(const EnumLadder& l, double radius2, V& v)
        : lad(l), r2(radius2), tol(ENUM_EDGE_TOL * (1.0 + radius2)), vis(v) {
        x.assign(l.k, 0);
        used.assign(l.k + 1, 0.0);
        slevel.assign(size_t(l.k + 1) * l.k, 0.0);
    }

    double* srow(int p) { return slevel.data() + size_t(p) * lad.k; }

    // range of coordinate p given everything outside it
    void range(int p, int& lo, int& hi) const {
        double rem = r2 + tol - used[p];
        if (rem < 0) { lo = 0; hi = -1; return; }
        const double f = lad.at(p, p);
        const double off = slevel[size_t(p) * lad.k + p];
        double w = std::sqrt(rem);
        lo = int(std::ceil((-w - off) / f - 1e-12));
        hi = int(std::floor((w - off) / f + 1e-12));
    }

    void fix(int p, int v) {
        x[p] = v;
        const double* sp = srow(p);
        double* sn = srow(p + 1);
        double step = lad.at(p, p) * v + sp[p];
        used[p + 1] = used[p] + step * step;
        for (int q = p + 1; q < lad.k; ++q) sn[q] = sp[q] + lad.at(q, p) * v;
        vis.enter(p, v);
    }

    // full walk from position p; zero_prefix restricts to the half space
    // (nonnegative until the first strictly positive coordinate)
    template <bool Half>
    void walk(int p, bool zero_prefix) {
        if (p == lad.k) {
            if (Half && zero_prefix) return;  // the origin in half mode
            double n2 = used[p];
            if (n2 <= r2 + tol) vis.leaf(x.data(), n2);
            return;
        }
        int lo, hi;
        range(p, lo, hi);
        if (Half && zero_prefix && lo < 0) lo = 0;
        for (int v = lo; v <= hi; ++v) {
            fix(p, v);
            walk<Half>(p + 1, Half && zero_prefix && v == 0);
        }
    }
};

}  // namespace detail

// every lattice point with x^T G x <= radius2, lexicographic coordinate order.
// the origin is emitted too; callers that do not want it skip coords == 0.
template <class V>
void enumerate_full(const Eigen::MatrixXd& gram, double radius2, V&& vis) {
    EnumLadder lad = EnumLadder::build(gram);
    detail::EnumWalk<V> w(lad, radius2, vis);
    w.template walk<false>(0, false);
}

// half-space walk: one representative per +-x pair, origin excluded
template <class V>
void enumerate_half(const Eigen::MatrixXd& gram, double radius2, V&& vis) {
    EnumLadder lad = EnumLadder::build(gram);
    detail::EnumWalk<V> w(lad, radius2, vis);
    w.template walk<true>(0, true);
}

// per-point contribution for the deterministic parallel reduction
struct SliceStats {
    Neumaier acc;
    long long pairs = 0;       // +-x pairs seen
    double min_det = -1.0;     // smallest |det| in the slice, <0 until set
    std::vector<int32_t> min_coords;
};

struct BallSum {
    double value = 0.0;        // sum of term(x) over all nonzero points
    long long point_count = 0; // nonzero points in the ball
    double min_abs_det = -1.0;
    std::vector<int32_t> min_coords;
};

// TermVisitor contract: copyable; enter(pos, value); term(coords, norm2)
// returning the per-point contribution; abs_det(coords) for the minimum
// tracker (may equal the term's base quantity).
//
// The sum runs over the half space sliced by the value of coordinate 0.
// Each +-x pair contributes 2*term(x). Per-slice compensated accumulators
// are merged in ascending slice order, so the result does not depend on
// the thread count.
template <class TV>
BallSum sum_over_ball(const Eigen::MatrixXd& gram, double radius2, const TV& proto) {
    EnumLadder lad = EnumLadder::build(gram);
    const int k = lad.k;

    // range of the outermost coordinate
    int hi = 0;
    {
        double f = lad.at(0, 0);
        hi = int(std::floor(std::sqrt(std::max(0.0, radius2 * (1.0 + ENUM_EDGE_TOL))) / f + 1e-12));
    }

    std::vector<SliceStats> slices(size_t(hi) + 1);

    struct SliceVisitor {
        TV tv;
        SliceStats* out;
        double weight = 2.0;
        void enter(int p, int v) { tv.enter(p, v); }
        void leaf(const int32_t* xs, double n2) {
            double d = 0.0;
            double t = tv.term(xs, n2, d);
            out->acc.add(weight * t);
            out->pairs += 1;
            if (out->min_det < 0 || d < out->min_det) {
                out->min_det = d;
                out->min_coords.assign(xs, xs + tv.rank());
            }
        }
    };

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int c = 0; c <= hi; ++c) {
        SliceVisitor sv{proto, &slices[size_t(c)]};
        detail::EnumWalk<SliceVisitor> walk(lad, radius2, sv);
        int lo0, hi0;
        walk.range(0, lo0, hi0);
        if (c > hi0) continue;
        walk.fix(0, c);
        walk.template walk<true>(1, c == 0);
    }

    BallSum out;
    Neumaier total;
    for (int c = 0; c <= hi; ++c) {
        const SliceStats& s = slices[size_t(c)];
        total.merge(s.acc);
        out.point_count += 2 * s.pairs;
        if (s.min_det >= 0 && (out.min_abs_det < 0 || s.min_det < out.min_abs_det)) {
            out.min_abs_det = s.min_det;
            out.min_coords = s.min_coords;
        }
    }
    out.value = total.value();
    return out;
}

}  // namespace idsum
