#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace idsum {

// out-of-scope input (catalog miss, precondition violation, unsupported signature);
// the cli maps this family to exit code 1
struct ScopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// predicted enumeration work exceeds the configured budget; cli exit code 2
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// compensated summation (Neumaier variant): running sum plus correction term.
// used everywhere a float sum must not depend on accumulation noise.
struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    // merging two accumulators in a fixed order keeps results bit-identical
    void merge(const Neumaier& o) {
        add(o.sum);
        comp += o.comp;
    }

    double value() const { return sum + comp; }
};

// shortest decimal string that round-trips to the same double
inline std::string fmt_shortest(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// fixed 4 decimal places, for table output
inline std::string fmt_fixed4(double v) {
    char buf[48];
    snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
}

}  // namespace idsum
