#ifndef DISCSCHED_ERRORS_HPP
#define DISCSCHED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace discsched {

// Base class for domain errors so callers can catch the whole family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mempool_step: the allocated transaction is in neither the pool nor the emissions.
struct AllocatedNotPresent : Error {
    using Error::Error;
};

// simulate: a policy returned a transaction that was not presented to it.
struct PolicyChoseUnavailable : Error {
    using Error::Error;
};

// opt_bruteforce: instance exceeds the exhaustive-search caps.
struct InstanceTooLarge : Error {
    using Error::Error;
};

// Equal-ratio solver: no sign change found on the bracket (even after scanning).
struct NoSignChange : Error {
    using Error::Error;
};

// Equal-ratio solver: solved ratios violate monotonicity; indicates a solver bug.
struct NonMonotoneRatios : Error {
    using Error::Error;
};

// Adaptive adversary driven out of protocol order.
struct ProtocolViolation : Error {
    using Error::Error;
};

// Adversary constructor fed a non-positive fee sequence.
struct NonPositiveFee : Error {
    using Error::Error;
};

} // namespace discsched

#endif
