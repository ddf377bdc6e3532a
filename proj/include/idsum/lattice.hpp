#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "numberfield.hpp"

namespace idsum {

// exact-determinant hook for lattices whose points are matrices of algebraic
// origin. The enumeration kernels accumulate the tag's linear forms
// incrementally; det2() turns the leaf values into |det|^2, snapped to the
// nearest integer when within 1e-9 relative (the underlying quantity is a
// rational integer for every tagged lattice, so the snap removes float fuzz
// without ever inventing a value).
struct ElementTag {
    virtual ~ElementTag() = default;
    virtual int form_count() const = 0;
    virtual const Eigen::MatrixXcd& forms() const = 0;  // form_count x rank
    virtual double det2(const std::complex<double>* acc) const = 0;
};

inline double snap_det2(double q2) {
    double r = std::round(q2);
    if (std::abs(q2 - r) <= 1e-9 * std::max(1.0, q2)) return r;
    return q2;
}

struct MatrixLattice {
    std::vector<Eigen::MatrixXcd> basis;  // rank generator matrices, n x n
    int rank = 0;
    int matrix_size = 0;
    Eigen::MatrixXd gram;   // <B_i, B_j> = Re tr(B_i B_j^H)
    double volume = 0.0;    // sqrt(det gram)
    std::shared_ptr<const ElementTag> element_tag;  // null for plain lattices
    std::string label;

    Eigen::MatrixXcd matrix_of(const int32_t* coords) const;
    double point_abs_det(const int32_t* coords) const;  // tagged fast path or LU
};

struct LatticePoint {
    std::vector<int32_t> coords;
    Eigen::MatrixXcd matrix;
    double frobenius_norm = 0.0;
    double abs_det = 0.0;
};

struct EnumOptions {
    double budget = 1e8;  // predicted-point guard, checked before enumeration
};

// diagonal matrix lattice psi(O_K) of a totally real or totally complex field
MatrixLattice canonical_embedding_lattice(const FieldPtr& K);

// all nonzero points with Frobenius norm <= M, lexicographic coordinate order.
// materializes every point; intended for small balls and oracle checks
std::vector<LatticePoint> enumerate_ball(const MatrixLattice& L, double M,
                                         const EnumOptions& opt = {});

// the point minimizing |det| (ties: first in enumeration order)
LatticePoint min_determinant_in_ball(const MatrixLattice& L, double M,
                                     const EnumOptions& opt = {});

struct NormalizationFactor {
    double scale;          // multiplies the sum
    double radius_factor;  // multiplies the radius
};
// factors turning S(M) into the volume-normalized sum: the sum over the ball
// of radius M * radius_factor is multiplied by scale
NormalizationFactor normalization_factor(const MatrixLattice& L, double m);

// same generators scaled by t; drops the element tag (exact determinant
// bookkeeping does not survive scaling)
MatrixLattice scaled_lattice(const MatrixLattice& L, double t);

// throws BudgetError when the expected point count exceeds opt.budget
void guard_budget(const MatrixLattice& L, double M, const EnumOptions& opt);

}  // namespace idsum
