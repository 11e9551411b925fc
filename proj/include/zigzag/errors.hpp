#pragma once

#include <stdexcept>
#include <string>

namespace zigzag {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (non-finite lambda, c outside [-5/4, 1], ...).
struct DomainError : Error {
    using Error::Error;
};

// Malformed data: bad potential, inverted window, N < 1.
struct ValidationError : Error {
    using Error::Error;
};

// Operation needs c_k != 0 but the channel is singular.
struct ChannelSingularError : Error {
    using Error::Error;
};

// Evaluation too close to a Dirichlet point, where the monodromy has a pole.
struct PoleError : Error {
    using Error::Error;
};

// Precondition of a construction not met (lambda not in the required set, wrong channel type).
struct MisuseError : Error {
    using Error::Error;
};

struct DegenerateError : Error {
    using Error::Error;
};

} // namespace zigzag
