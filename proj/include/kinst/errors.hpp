#pragma once

#include <stdexcept>
#include <string>

namespace kinst {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by a fraction with zero numerator") {}
};

struct GridExhausted : Error {
    explicit GridExhausted(const std::string& what) : Error(what) {}
};

struct LatticeOverflow : Error {
    explicit LatticeOverflow(const std::string& what) : Error(what) {}
};

struct PoleDetected : Error {
    int pole_order;
    explicit PoleDetected(int order)
        : Error("pole of order " + std::to_string(order) + " at eps=0"),
          pole_order(order) {}
};

struct ZeroWeight : Error {
    ZeroWeight() : Error("K-theoretic Euler class of a character with a zero weight") {}
};

struct CancellationFailure : Error {
    explicit CancellationFailure(const std::string& what) : Error(what) {}
};

struct CellOutOfDiagram : Error {
    CellOutOfDiagram() : Error("cell is not contained in the Young diagram") {}
};

struct RangeViolation : Error {
    explicit RangeViolation(const std::string& what) : Error(what) {}
};

struct SingularSystem : Error {
    explicit SingularSystem(const std::string& what) : Error(what) {}
};

struct NonInvertible : Error {
    explicit NonInvertible(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

struct CacheCorrupt : Error {
    explicit CacheCorrupt(const std::string& what) : Error(what) {}
};

} // namespace kinst
