#ifndef DISCSCHED_RNG_HPP
#define DISCSCHED_RNG_HPP

#include <cstdint>

namespace discsched {

// Counter-based random source. Every value is a pure function of (key,
// counter), so draws are order-insensitive and sub-streams derived for
// parallel work items never overlap by construction.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t key) : key_(key) {}

    // Independent sub-stream for work item `index` (sample, step, ...).
    SplitRng stream(std::uint64_t index) const;

    // Uniform double in [0, 1) for the given counter.
    double uniform(std::uint64_t counter) const;

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

} // namespace discsched

#endif
