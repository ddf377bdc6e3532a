#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rational.hpp"
#include "util.hpp"

namespace idsum {

struct NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// element of O_K (or of K when coordinates are non-integral),
// coordinates over the field's integral basis
struct FieldElement {
    FieldPtr field;
    std::vector<Rat> coords;

    FieldElement() = default;
    FieldElement(FieldPtr k, std::vector<Rat> c) : field(std::move(k)), coords(std::move(c)) {}

    bool is_zero() const;
    bool is_integral() const;
    bool operator==(const FieldElement& o) const { return coords == o.coords; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;

    FieldElement conj() const;                  // complex conjugation (catalog matrix)
    Rat norm() const;                           // field norm, exact
    std::complex<double> embed(int e) const;    // e-th chosen embedding
    double t2_norm2() const;                    // sum over all embeddings of |sigma(x)|^2

    static FieldElement one(const FieldPtr& k);
    static FieldElement from_int_coords(const FieldPtr& k, const std::vector<int64_t>& c);
};

struct NumberField : std::enable_shared_from_this<NumberField> {
    std::string name;
    int degree = 0;
    int r1 = 0, r2 = 0;  // real embeddings, complex pairs
    bool totally_real = false;
    bool totally_complex = false;

    std::vector<int64_t> defining_polynomial;      // ascending coefficients, monic
    std::vector<std::vector<Rat>> integral_basis;  // rows: basis over the power basis
    int64_t discriminant = 0;
    int class_number = 0;
    double regulator = 0.0;
    int roots_of_unity = 0;                            // omega, order of the torsion group
    std::vector<std::vector<Rat>> fundamental_units;   // coords over the integral basis
    std::vector<std::vector<int64_t>> conjugation;     // basis images under conjugation
    std::vector<std::pair<int64_t, std::vector<int>>> special_primes;  // p -> residue degrees
    std::string unit_caveat;  // nonempty when the catalog units may span a finite-index subgroup

    // derived at load
    std::vector<std::complex<double>> roots_all;  // r1 real asc, then (rep, conj) pairs
    Eigen::MatrixXcd emb_chosen;                  // (r1+r2) x degree, sigma_e(w_j)
    Eigen::MatrixXcd emb_all;                     // degree x degree
    Eigen::MatrixXcd emb_all_inv;
    std::vector<std::vector<std::vector<int64_t>>> mult_table;  // w_i w_j over basis
    std::vector<std::vector<int64_t>> torsion_units;            // all omega of them

    int unit_rank() const { return r1 + r2 - 1; }
    int chosen_count() const { return r1 + r2; }
    // side of the diagonal matrix representation; only meaningful for
    // totally real / totally complex fields
    int matrix_size() const { return totally_real ? degree : degree / 2; }

    FieldElement element(const std::vector<Rat>& c) const;
    FieldElement element_int(const std::vector<int64_t>& c) const;
};

// load a field from the catalog (data/fields.json, overridable via IDSUM_DATA).
// runs the full consistency suite on first load; unknown name or a failed
// check raises ScopeError.
FieldPtr catalog_lookup(const std::string& name);
std::vector<std::string> catalog_field_names();
// resolved path of the catalog file (IDSUM_DATA override, build default otherwise)
std::string catalog_data_path();

struct ResidueConstant {
    double alpha;    // 2^r1 (2pi)^r2 R / (omega sqrt|d|)
    double alpha_h;  // alpha * class number
};
ResidueConstant residue_constant(const FieldPtr& K);

// leading density constant for the unit count in a Frobenius ball:
// omega n^(n-1) / (R (n-1)!); n must match the field's matrix size
double unit_density_constant(const FieldPtr& K, int n);

struct BoundConstants {
    double n_tilde;   // normalized-sum growth constant
    double c_k;       // explicit low-exponent constant (0 when the tag has none)
    std::string tag;  // which shape applies: totally_real, totally_real_m1,
                      // totally_complex, totally_complex_nr1
};
// constants controlling the normalized inverse determinant sum at exponent m.
// for totally complex fields m must be even (m = 2 n_r).
BoundConstants normalized_bound_constants(const FieldPtr& K, double m);

}  // namespace idsum
