#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kfp {

using cplx = std::complex<double>;

constexpr int kMaxDim = 3;

// Multi-index over at most kMaxDim axes. Unused axes stay zero, so the same
// type serves d = 1, 2, 3.
struct MIdx {
    std::array<int, kMaxDim> v{0, 0, 0};

    int& operator[](int i) { return v[i]; }
    int operator[](int i) const { return v[i]; }
    bool operator==(const MIdx& o) const { return v == o.v; }
    bool operator<(const MIdx& o) const { return v < o.v; }

    int sum() const { return v[0] + v[1] + v[2]; }
    int max_abs() const {
        int m = 0;
        for (int x : v) m = std::max(m, std::abs(x));
        return m;
    }
    MIdx plus(int axis, int delta) const {
        MIdx r = *this;
        r.v[axis] += delta;
        return r;
    }
    bool nonneg() const { return v[0] >= 0 && v[1] >= 0 && v[2] >= 0; }
};

inline MIdx midx(int a, int b = 0, int c = 0) { return MIdx{{a, b, c}}; }

struct MIdxHash {
    size_t operator()(const MIdx& m) const {
        size_t h = 1469598103934665603ull;
        for (int x : m.v) {
            h ^= static_cast<size_t>(static_cast<uint32_t>(x));
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Enumerate {n in N^d : |n|_1 <= total}, graded lexicographic.
std::vector<MIdx> enumerate_simplex(int dim, int total);

// Enumerate {n in N^d : |n|_1 == total}, lexicographic.
std::vector<MIdx> enumerate_level(int dim, int total);

inline double factorial(int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline double midx_factorial(const MIdx& a) {
    return factorial(a[0]) * factorial(a[1]) * factorial(a[2]);
}

// FNV-1a, used for config/cache hashing and file checksums.
struct Fnv1a {
    uint64_t h = 1469598103934665603ull;
    void update(const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    }
    template <class T>
    void update_pod(const T& t) {
        update(&t, sizeof(T));
    }
    uint64_t digest() const { return h; }
};

// Deterministic parallel map: the work decomposition is a fixed function of
// the index range, never of the scheduling.
void parallel_for(std::int64_t n, int n_threads, const std::function<void(std::int64_t, std::int64_t)>& chunk_fn);

int default_threads();

struct NoConvergence : std::runtime_error {
    std::vector<double> residual_history;
    NoConvergence(const std::string& msg, std::vector<double> hist)
        : std::runtime_error(msg), residual_history(std::move(hist)) {}
};

struct IncompatibleRhs : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CutMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace kfp
