#pragma once

#include <cstdint>

namespace acirc {

/// splitmix64. Every seeded computation in the toolkit draws from this
/// generator, so identical seeds give identical evaluation points on any
/// platform; std:: distributions are deliberately avoided.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform-ish value in [0, n); the modulo bias is irrelevant at the
    /// ranges used here.
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    Rng fork() { return Rng(next()); }

private:
    std::uint64_t state_;
};

} // namespace acirc
