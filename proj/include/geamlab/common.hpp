#pragma once

#include <atomic>
#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace geamlab {

using cplx = std::complex<double>;

// Validation thresholds used across the library. Kept in one place so the
// tests and the CLI agree on what "valid" means.
struct Tolerances {
    double hermiticity = 1e-12;   // max |A - A^dag| after symmetrization
    double trace = 1e-12;         // |tr rho - 1|
    double psd = 1e-10;           // allowed negative eigenvalue magnitude
    double eig_reconstruct = 1e-10;
    double eig_offdiag = 1e-13;   // Jacobi sweep stopping criterion
    double identity = 1e-9;       // default residual tolerance for identity checks
};

inline const Tolerances& tol() {
    static const Tolerances t{};
    return t;
}

class dimension_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class numeric_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Worker-pool bound: GEAMLAB_THREADS, else hardware concurrency.
inline unsigned max_threads() {
    if (const char* env = std::getenv("GEAMLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Runs fn(i) for i in [0, n). Results must be written to pre-sized slots so
// the outcome is independent of the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned nthreads = std::min<std::size_t>(max_threads(), n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace geamlab
