#pragma once

#include <stdexcept>
#include <string>

namespace tacnode {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
public:
    NonConvergence(long n_max, double last_diff)
        : Error("quadrature did not converge: n_max=" + std::to_string(n_max) +
                " last_diff=" + std::to_string(last_diff)),
          n_max(n_max), last_diff(last_diff) {}
    long n_max;
    double last_diff;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class Singular : public Error {
public:
    using Error::Error;
};

class ContourConflict : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

class TargetOutOfRange : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class DegenerateQuartic : public Error {
public:
    using Error::Error;
};

}  // namespace tacnode
