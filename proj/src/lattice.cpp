#include "idsum/lattice.hpp"

#include <cmath>
#include <cstdio>

#include "idsum/enum_kernel.hpp"

namespace idsum {

namespace {

// diagonal-embedding lattice: one linear form per matrix slot, det is the
// product of the slot values
struct FieldTag : ElementTag {
    Eigen::MatrixXcd f;  // n x degree
    int form_count() const override { return int(f.rows()); }
    const Eigen::MatrixXcd& forms() const override { return f; }
    double det2(const std::complex<double>* acc) const override {
        double q2 = 1.0;
        for (int e = 0; e < int(f.rows()); ++e) q2 *= std::norm(acc[e]);
        return snap_det2(q2);
    }
};

}  // namespace

Eigen::MatrixXcd MatrixLattice::matrix_of(const int32_t* coords) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(matrix_size, matrix_size);
    for (int i = 0; i < rank; ++i)
        if (coords[i]) m += double(coords[i]) * basis[size_t(i)];
    return m;
}

double MatrixLattice::point_abs_det(const int32_t* coords) const {
    if (element_tag) {
        const Eigen::MatrixXcd& f = element_tag->forms();
        std::vector<std::complex<double>> acc(size_t(f.rows()), std::complex<double>(0, 0));
        for (int p = 0; p < rank; ++p) {
            if (!coords[p]) continue;
            for (int e = 0; e < int(f.rows()); ++e) acc[size_t(e)] += double(coords[p]) * f(e, p);
        }
        return std::sqrt(element_tag->det2(acc.data()));
    }
    return std::abs(matrix_of(coords).determinant());
}

MatrixLattice canonical_embedding_lattice(const FieldPtr& K) {
    if (K->r1 > 0 && K->r2 > 0)
        throw ScopeError("canonical embedding lattice needs a totally real or totally complex field, " +
                         K->name + " is mixed");
    const int n = K->matrix_size();
    const int d = K->degree;

    MatrixLattice L;
    L.rank = d;
    L.matrix_size = n;
    L.label = "psi(O_" + K->name + ")";
    L.basis.reserve(size_t(d));
    for (int j = 0; j < d; ++j) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
        for (int e = 0; e < n; ++e) b(e, e) = K->emb_chosen(e, j);
        L.basis.push_back(std::move(b));
    }
    L.gram.resize(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::complex<double> s(0, 0);
            for (int e = 0; e < n; ++e) s += K->emb_chosen(e, i) * std::conj(K->emb_chosen(e, j));
            L.gram(i, j) = s.real();
        }
    L.gram = 0.5 * (L.gram + L.gram.transpose().eval());  // kill asymmetric fuzz
    L.volume = std::sqrt(L.gram.determinant());

    auto tag = std::make_shared<FieldTag>();
    tag->f = K->emb_chosen;
    L.element_tag = tag;
    return L;
}

void guard_budget(const MatrixLattice& L, double M, const EnumOptions& opt) {
    double est = ball_point_estimate(L.rank, M, L.volume);
    if (est > opt.budget) {
        char buf[64];
        snprintf(buf, sizeof(buf), "~%.3g points, budget %.3g", est, opt.budget);
        throw BudgetError("enumeration budget exceeded before start: ball M=" + fmt_shortest(M) +
                          " on " + L.label + " holds " + buf);
    }
}

std::vector<LatticePoint> enumerate_ball(const MatrixLattice& L, double M, const EnumOptions& opt) {
    guard_budget(L, M, opt);
    std::vector<LatticePoint> out;
    struct Collect : EnumSink {
        const MatrixLattice* L;
        std::vector<LatticePoint>* out;
        void leaf(const int32_t* x, double n2) {
            bool zero = true;
            for (int i = 0; i < L->rank; ++i)
                if (x[i]) { zero = false; break; }
            if (zero) return;
            LatticePoint p;
            p.coords.assign(x, x + L->rank);
            p.matrix = L->matrix_of(x);
            p.frobenius_norm = std::sqrt(n2);
            p.abs_det = L->point_abs_det(x);
            out->push_back(std::move(p));
        }
    } c;
    c.L = &L;
    c.out = &out;
    enumerate_full(L.gram, M * M, c);
    return out;
}

LatticePoint min_determinant_in_ball(const MatrixLattice& L, double M, const EnumOptions& opt) {
    guard_budget(L, M, opt);
    struct Tracker : EnumSink {
        const MatrixLattice* L;
        bool found = false;
        double best = 0.0;
        double best_n2 = 0.0;
        std::vector<int32_t> coords;
        void leaf(const int32_t* x, double n2) {
            bool zero = true;
            for (int i = 0; i < L->rank; ++i)
                if (x[i]) { zero = false; break; }
            if (zero) return;
            double d = L->point_abs_det(x);
            if (!found || d < best) {
                found = true;
                best = d;
                best_n2 = n2;
                coords.assign(x, x + L->rank);
            }
        }
    } t;
    t.L = &L;
    enumerate_full(L.gram, M * M, t);
    if (!t.found)
        throw ScopeError("no nonzero lattice points in the ball M=" + fmt_shortest(M) + " on " + L.label);
    LatticePoint p;
    p.coords = t.coords;
    p.matrix = L.matrix_of(t.coords.data());
    p.frobenius_norm = std::sqrt(t.best_n2);
    p.abs_det = t.best;
    return p;
}

NormalizationFactor normalization_factor(const MatrixLattice& L, double m) {
    // scale Vol^(m n / k), radius enlarged by Vol^(1/k)
    double vk = std::pow(L.volume, 1.0 / L.rank);
    return {std::pow(vk, m * L.matrix_size), vk};
}

MatrixLattice scaled_lattice(const MatrixLattice& L, double t) {
    MatrixLattice s;
    s.rank = L.rank;
    s.matrix_size = L.matrix_size;
    s.label = L.label + " scaled " + fmt_shortest(t);
    s.basis.reserve(L.basis.size());
    for (const auto& b : L.basis) s.basis.push_back(t * b);
    s.gram = (t * t) * L.gram;
    s.volume = std::pow(std::abs(t), L.rank) * L.volume;
    s.element_tag = nullptr;
    return s;
}

}  // namespace idsum
