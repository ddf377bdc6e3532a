#pragma once

#include <string>
#include <vector>

#include "lattice.hpp"

namespace idsum {

// suspect-zero determinant inside a sum: the lattice is not NVD
struct NVDError : ScopeError {
    using ScopeError::ScopeError;
};

struct SumSample {
    double radius = 0.0;
    double value = 0.0;
    long long point_count = 0;
};

struct SumCurve {
    std::string label;
    double exponent_m = 0.0;
    bool normalized = false;
    std::vector<SumSample> samples;
};

struct DetSumResult {
    double value = 0.0;
    long long point_count = 0;
    double min_abs_det = 0.0;
};

// sum of |det X|^-m over the nonzero points of the closed Frobenius ball,
// deterministic sliced accumulation (bit-identical for any thread count)
DetSumResult inverse_det_sum(const MatrixLattice& L, double M, double m,
                             const EnumOptions& opt = {});

// serial reference path: one compensated accumulator over the full ball in
// lexicographic order; kept for testing and benchmarking the sliced walk
DetSumResult inverse_det_sum_serial(const MatrixLattice& L, double M, double m,
                                    const EnumOptions& opt = {});

// volume-normalized sum: scale * S(M * radius_factor). The legacy flag
// reproduces the scale-only variant (no radius enlargement) some earlier
// treatments used; it exists for comparison output only.
DetSumResult normalized_inverse_det_sum(const MatrixLattice& L, double M, double m,
                                        bool legacy_scale_only = false,
                                        const EnumOptions& opt = {});

// pairwise-error union bound: S^(2 n_r)(2M), radius doubled because a
// difference of two codewords of norm <= M has norm <= 2M
double union_bound(const MatrixLattice& L, double M, int n_r, const EnumOptions& opt = {});

SumCurve sum_curve(const MatrixLattice& L, const std::vector<double>& radii, double m,
                   bool normalized = false, bool legacy_scale_only = false,
                   const EnumOptions& opt = {});

}  // namespace idsum
