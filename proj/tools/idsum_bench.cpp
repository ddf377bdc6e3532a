#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "idsum/detsum.hpp"
#include "idsum/qoalgebra.hpp"

using namespace idsum;

namespace {

struct Timed {
    DetSumResult result;
    double seconds = 0;
};

template <typename F>
Timed timed(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    Timed t;
    t.result = f();
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return t;
}

void bench_lattice(const MatrixLattice& L, double M, double m) {
    EnumOptions opt;
    opt.budget = 1e9;
    auto serial = timed([&] { return inverse_det_sum_serial(L, M, m, opt); });
    auto sliced = timed([&] { return inverse_det_sum(L, M, m, opt); });
    const double pts = double(serial.result.point_count);
    printf("%-28s M=%-7.4g %10lld pts | serial %8.0f pts/s | sliced %8.0f pts/s | x%.2f\n",
           L.label.c_str(), M, serial.result.point_count, pts / serial.seconds,
           pts / sliced.seconds, serial.seconds / sliced.seconds);
    if (sliced.result.value != serial.result.value)
        printf("  MISMATCH: sliced %.17g vs serial %.17g\n", sliced.result.value,
               serial.result.value);
}

}  // namespace

int main(int argc, char** argv) {
    // scale factor stretches every radius, e.g. ./idsum_bench 1.3
    const double scale = argc > 1 ? std::stod(argv[1]) : 1.0;
#ifdef _OPENMP
    printf("omp threads: %d\n", omp_get_max_threads());
#else
    printf("built without OpenMP; the sliced walk runs on one thread\n");
#endif
    // the sliced path only pulls ahead with real cores; on a single-core box
    // expect a ratio near 1 and read the pts/s columns as the machine baseline
    bench_lattice(canonical_embedding_lattice(catalog_lookup("GAUSSIAN")), 900 * scale, 2.0);
    bench_lattice(canonical_embedding_lattice(catalog_lookup("CYCLOTOMIC_5")), 28 * scale, 2.0);
    bench_lattice(order_lattice(algebra_lookup("HAMILTON")), 12 * scale, 4.0);
    return 0;
}
