#include "arproc/rng.hpp"

namespace arproc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream, bool antithetic)
    : gen_(splitmix64(seed ^ splitmix64(stream))), anti_(antithetic) {}

double RngStream::uniform() {
    double u = double(gen_() >> 11) * 0x1.0p-53;
    if (anti_) u = 1.0 - u;
    if (u <= 0.0) u = 0x1.0p-53;
    if (u >= 1.0) u = 1.0 - 0x1.0p-53;
    return u;
}

}  // namespace arproc
