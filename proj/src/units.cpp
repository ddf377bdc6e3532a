#include "idsum/units.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "idsum/util.hpp"

namespace idsum {

namespace {

constexpr double kLogSlack = 1e-9;

// squared Frobenius norm of psi(u) from embedding values at the chosen
// representatives: totally real sum sigma^2 over all n, totally complex
// sum |sigma|^2 over the n_r representatives
double psi_fnorm2(const FieldPtr& K, const Eigen::VectorXcd& chosen) {
    double s = 0;
    for (int j = 0; j < K->chosen_count(); ++j) s += std::norm(chosen[j]);
    return s;
}

FieldElement materialize(const FieldPtr& K, const Eigen::VectorXcd& sigma_all) {
    Eigen::VectorXcd coords = K->emb_all_inv * sigma_all;
    std::vector<Rat> c(size_t(K->degree));
    for (int j = 0; j < K->degree; ++j) {
        double re = coords[j].real();
        double rounded = std::round(re);
        if (std::abs(re - rounded) > 1e-6 || std::abs(coords[j].imag()) > 1e-6)
            throw std::runtime_error("unit materialization drifted off the integer lattice in " + K->name);
        c[size_t(j)] = Rat(int64_t(rounded));
    }
    return K->element(c);
}

// embedding values of u at every embedding, conjugate pairs filled from the
// chosen representative
Eigen::VectorXcd expand_chosen(const FieldPtr& K, const Eigen::VectorXcd& chosen) {
    Eigen::VectorXcd all(K->degree);
    for (int j = 0; j < K->r1; ++j) all[j] = chosen[j];
    for (int j = 0; j < K->r2; ++j) {
        all[K->r1 + 2 * j] = chosen[K->r1 + j];
        all[K->r1 + 2 * j + 1] = std::conj(chosen[K->r1 + j]);
    }
    return all;
}

}  // namespace

std::vector<FieldElement> enumerate_units_in_ball(const FieldPtr& K, double M) {
    if (M < 1.0) throw ScopeError("unit enumeration needs M >= 1");
    if (!K->totally_real && !K->totally_complex)
        throw ScopeError("the Frobenius ball is defined for totally real or totally complex fields; " +
                         K->name + " is neither");
    const int rank = K->unit_rank();
    if (int(K->fundamental_units.size()) != rank)
        throw ScopeError("catalog incomplete for " + K->name + ": " +
                         std::to_string(K->fundamental_units.size()) + " fundamental units listed, unit rank is " +
                         std::to_string(rank));

    std::vector<FieldElement> torsion;
    for (const auto& tc : K->torsion_units) torsion.push_back(K->element_int(tc));

    std::vector<FieldElement> out;
    const double r2limit = M * M + 1e-9 * (1.0 + M * M);

    if (rank == 0) {
        for (const auto& t : torsion) {
            Eigen::VectorXcd chosen(K->chosen_count());
            for (int j = 0; j < K->chosen_count(); ++j) chosen[j] = t.embed(j);
            if (psi_fnorm2(K, chosen) <= r2limit) out.push_back(t);
        }
        return out;
    }

    const int cc = K->chosen_count();
    const size_t srank = size_t(rank);
    const double logM = std::log(M);

    // log-embedding matrix of the fundamental units at the chosen embeddings,
    // and their raw embedding values for materialization
    Eigen::MatrixXd L(cc, rank);
    std::vector<Eigen::VectorXcd> eps_emb(srank);
    for (int i = 0; i < rank; ++i) {
        FieldElement eps = K->element(K->fundamental_units[size_t(i)]);
        Eigen::VectorXcd ce(cc);
        for (int j = 0; j < cc; ++j) {
            ce[j] = eps.embed(j);
            L(j, i) = std::log(std::abs(ce[j]));
        }
        eps_emb[size_t(i)] = ce;
    }

    // exponent box: the coarse per-coordinate bound from the smallest positive
    // log, tightened against the rigorous row-sum bound through the inverse
    // of a full-rank square block
    double min_pos_log = 0;
    for (int j = 0; j < cc; ++j)
        for (int i = 0; i < rank; ++i) {
            double a = std::abs(L(j, i));
            if (a > 1e-9 && (min_pos_log == 0 || a < min_pos_log)) min_pos_log = a;
        }
    if (min_pos_log == 0)
        throw ScopeError("catalog incomplete for " + K->name + ": fundamental units have no positive log coordinate");
    const double coarse = double(rank) * std::max(logM, 1.0) / min_pos_log;

    Eigen::MatrixXd A = L.topRows(rank);
    Eigen::MatrixXd Ainv = A.inverse();
    std::vector<int64_t> box(srank);
    for (int i = 0; i < rank; ++i) {
        double row1 = Ainv.row(i).cwiseAbs().sum();
        double rigorous = row1 * double(K->degree) * std::max(logM, 1.0);
        box[size_t(i)] = int64_t(std::ceil(std::max(coarse, rigorous))) + 1;
    }

    std::vector<int64_t> k(srank);
    for (int i = 0; i < rank; ++i) k[size_t(i)] = -box[size_t(i)];

    const int omega = int(torsion.size());
    (void)omega;
    while (true) {
        // log-space reject before any exponential: every chosen embedding of
        // a ball member satisfies log|sigma| <= log M
        bool ok = true;
        Eigen::VectorXd logs = Eigen::VectorXd::Zero(cc);
        for (int i = 0; i < rank && ok; ++i) logs += double(k[size_t(i)]) * L.col(i);
        for (int j = 0; j < cc; ++j)
            if (logs[j] > logM + kLogSlack) {
                ok = false;
                break;
            }
        if (ok) {
            Eigen::VectorXcd chosen = Eigen::VectorXcd::Ones(cc);
            Eigen::VectorXcd chosen_inv = Eigen::VectorXcd::Ones(cc);
            for (int i = 0; i < rank; ++i) {
                double ki = double(k[size_t(i)]);
                for (int j = 0; j < cc; ++j) {
                    std::complex<double> p = std::pow(eps_emb[size_t(i)][j], ki);
                    chosen[j] *= p;
                    chosen_inv[j] /= p;
                }
            }
            if (psi_fnorm2(K, chosen) <= r2limit) {
                FieldElement u = materialize(K, expand_chosen(K, chosen));
                FieldElement v = materialize(K, expand_chosen(K, chosen_inv));
                FieldElement prod = u * v;
                if (!(prod == FieldElement::one(K)))
                    throw std::runtime_error("unit verification failed in " + K->name +
                                             ": candidate times its inverse is not 1");
                for (const auto& t : torsion) out.push_back(t * u);
            }
        }
        int p = 0;
        while (p < rank) {
            if (++k[size_t(p)] <= box[size_t(p)]) break;
            k[size_t(p)] = -box[size_t(p)];
            ++p;
        }
        if (p == rank) break;
    }
    return out;
}

UnitBallCount unit_ball_count(const FieldPtr& K, double M, bool keep_units) {
    std::vector<FieldElement> units = enumerate_units_in_ball(K, M);
    UnitBallCount out;
    out.field = K;
    out.radius = M;
    out.count = int64_t(units.size());
    const int n = K->matrix_size();
    out.predicted = unit_density_constant(K, n) * std::pow(std::log(M), double(n - 1));
    out.caveat = K->unit_caveat;
    if (keep_units) out.units = std::move(units);
    return out;
}

SumCurve unit_count_curve(const FieldPtr& K, const std::vector<double>& radii) {
    if (radii.empty()) throw ScopeError("unit count curve needs a nonempty radius grid");
    const double e = std::exp(1.0);
    for (size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < e - 1e-12)
            throw ScopeError("unit count curve radii must each be at least e");
        if (i && radii[i] <= radii[i - 1])
            throw ScopeError("unit count curve radii must be strictly increasing");
    }
    SumCurve c;
    c.label = "units(" + K->name + ")";
    c.exponent_m = 0.0;
    c.normalized = false;
    for (double M : radii) {
        UnitBallCount b = unit_ball_count(K, M);
        c.samples.push_back({M, double(b.count), b.count});
    }
    return c;
}

}  // namespace idsum
