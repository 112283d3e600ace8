#ifndef NJC_COMMON_HPP
#define NJC_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace njc {

/// Thrown when a documented precondition of an operation is violated.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a ratio denominator is numerically indistinguishable from zero.
class DegeneratePair : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EstimationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a formulation's hypothesis (e.g. absolute homogeneity) is not met.
class FormulationUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent child seed (restart index, check tag, ...).
inline uint64_t child_seed(uint64_t seed, uint64_t index) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(s);
}

inline uint64_t tag_seed(uint64_t seed, const std::string& tag) {
    uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return child_seed(seed, h);
}

/// Deterministic, platform-independent random stream. All sampling in the
/// library goes through this class so that a seed fully determines results.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        splitmix64(state_);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    /// Standard normal via Box-Muller (explicit formula, no library state).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    uint64_t state_;
};

}  // namespace njc

#endif  // NJC_COMMON_HPP
