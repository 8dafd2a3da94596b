#pragma once

#include <cmath>
#include <cstdint>

#include "avekit/linalg.hpp"

namespace avekit {

/// splitmix64 generator. Deliberately not std::mt19937 + distributions: those
/// are implementation-defined, and problem generation must be reproducible
/// from a seed across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// standard normal via Box-Muller
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// random sign, +1 or -1
    double sign() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

    Vector normal_vector(std::size_t n) {
        Vector v(n);
        for (auto& x : v) x = normal();
        return v;
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Orthogonal factor of a seeded Gaussian matrix (modified Gram-Schmidt with
/// one reorthogonalization pass; Gaussian columns are well conditioned, so
/// this is numerically solid).
inline DenseMatrix random_orthogonal(std::size_t n, Rng& rng) {
    DenseMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector v = rng.normal_vector(n);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                double proj = 0.0;
                for (std::size_t k = 0; k < n; ++k) proj += q(k, i) * v[k];
                for (std::size_t k = 0; k < n; ++k) v[k] -= proj * q(k, i);
            }
        }
        const double nv = norm2(v);
        for (std::size_t k = 0; k < n; ++k) q(k, j) = v[k] / nv;
    }
    return q;
}

} // namespace avekit
