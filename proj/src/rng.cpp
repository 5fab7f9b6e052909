#include "discsched/rng.hpp"

namespace discsched {
namespace {

// splitmix64 finalizer; full 64-bit avalanche.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

SplitRng SplitRng::stream(std::uint64_t index) const {
    // Distinct multiplier keeps stream derivation disjoint from uniform().
    return SplitRng(mix(key_ ^ (index * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL)));
}

double SplitRng::uniform(std::uint64_t counter) const {
    const std::uint64_t bits = mix(key_ ^ (counter * 0x9e3779b97f4a7c15ULL + 0x8cb92ba72f3d8dd7ULL));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace discsched
