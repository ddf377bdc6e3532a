#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "idsum/lattice.hpp"
#include "idsum/numberfield.hpp"

namespace idsum {

struct CyclicAlgebraCode;
using AlgebraPtr = std::shared_ptr<const CyclicAlgebraCode>;

// a = x1 + u x2 with x1, x2 in E; multiplication follows xu = ux* and u^2 = gamma
struct AlgebraElement {
    AlgebraPtr parent;
    FieldElement x1, x2;

    AlgebraElement(AlgebraPtr a, FieldElement a1, FieldElement a2)
        : parent(std::move(a)), x1(std::move(a1)), x2(std::move(a2)) {}

    bool is_zero() const { return x1.is_zero() && x2.is_zero(); }
    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
};

struct DivisionCertificate {
    double probe_radius = 0;
    int64_t points_checked = 0;
    double min_abs_det = 0;
};

// quaternionic cyclic algebra D = (E/K, conj, gamma) with E the compositum
// of a complex quadratic F and a totally real Galois K, carrying its natural
// (or configured) order and the data needed for the multiblock representation
struct CyclicAlgebraCode : std::enable_shared_from_this<CyclicAlgebraCode> {
    std::string name;
    FieldPtr F;  // complex quadratic
    FieldPtr K;  // totally real Galois, degree k
    FieldPtr E;  // compositum, degree 2k

    std::vector<Rat> gamma_k;  // gamma over K's integral basis
    FieldElement gamma_e;      // the same element inside E
    std::vector<std::vector<Rat>> center_map;  // O_K basis -> E coordinates
    std::vector<std::vector<Rat>> base_map;    // O_F basis -> E coordinates

    // order basis: 4k elements (x1, x2); natural order (w_j, 0), (0, w_j)
    // unless the config supplies its own
    std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> order_basis;
    std::vector<std::vector<Rat>> order_expand;  // inverse of the basis matrix transpose

    // block i evaluates E at the embedding extending K's i-th real embedding
    // with Im(embedding of F's imaginary unit) > 0
    std::vector<int> tau_index;    // into E's full embedding list
    Eigen::MatrixXcd tau_rows;     // k x 2k rows of E's embedding matrix
    std::vector<double> gamma_at;  // tau_i(gamma), real

    DivisionCertificate division_certificate;

    int k() const { return K->degree; }
    int matrix_size() const { return 2 * K->degree; }

    AlgebraElement element(const FieldElement& a1, const FieldElement& a2) const;
    AlgebraElement element_pair(const std::vector<Rat>& c1, const std::vector<Rat>& c2) const;
    AlgebraElement one() const;

    // evaluate an E element at block i's embedding
    std::complex<double> tau(int i, const FieldElement& x) const;
};

// algebras shipped in the catalog next to the fields
AlgebraPtr algebra_lookup(const std::string& name);
std::vector<std::string> catalog_algebra_names();
// same schema from a standalone config file
AlgebraPtr load_algebra_config(const std::string& path, const std::string& name);

// the 2x2 codeword matrix [[x1, x2], [gamma conj(x2), conj(x1)]] at the
// identity embedding; order-reversing (phi(ab) = phi(b) phi(a)), which leaves
// every determinant, norm, and index computed from it unchanged
Eigen::Matrix2cd phi(const AlgebraElement& a);

// block-diagonal 2k x 2k matrix of the Galois-conjugated phi blocks
Eigen::MatrixXcd multiblock_psi(const AlgebraElement& a);

// element-tagged lattice psi(Lambda), rank 4k in side-2k matrices
MatrixLattice order_lattice(const AlgebraPtr& A);

// module index [Lambda : x Lambda] by exact integer determinant of the
// right-multiplication matrix; checks |det psi(x)|^2 against it
int64_t principal_ideal_index(const AlgebraPtr& A, const AlgebraElement& x);

struct OrthogonalityCheck {
    double lhs = 0;     // ||psi(x) + psi(u y)||_F^2
    double rhs = 0;     // ||psi(x)||_F^2 + ||psi(u y)||_F^2
    double defect = 0;  // |lhs - rhs|
};
OrthogonalityCheck orthogonality_check(const AlgebraPtr& A, const FieldElement& x,
                                       const FieldElement& y);

struct QoGrowthBounds {
    double lower = 0;  // explicit main term: (log M)^(k-1) omega k^(k-1) / (R (k-1)!)
    struct UpperShape {
        double envelope_exponent = 0;     // k-1, the power of log M
        std::string symbolic_prefactor;   // the factors carried unevaluated
        double c_emp = 0;                 // sup of S(M)/(log M)^(k-1) over sampled radii
    } upper_shape;
};
QoGrowthBounds qo_growth_bounds(const AlgebraPtr& A, double M, int n_r,
                                const EnumOptions& opt = {});

}  // namespace idsum
