#pragma once

#include <stdexcept>
#include <string>

namespace qtherm {

// Root of the library's error hierarchy.  Every thrown condition that a
// caller can reasonably branch on gets its own subclass; everything carries a
// human-readable message.
class QthermError : public std::runtime_error {
public:
    explicit QthermError(const std::string& msg) : std::runtime_error(msg) {}
};

// --- linalg -------------------------------------------------------------

class NotHermitian : public QthermError {
public:
    explicit NotHermitian(const std::string& msg) : QthermError(msg) {}
};

class ConvergenceFailure : public QthermError {
public:
    explicit ConvergenceFailure(const std::string& msg) : QthermError(msg) {}
};

class DomainError : public QthermError {
public:
    explicit DomainError(const std::string& msg) : QthermError(msg) {}
};

class OverflowError : public QthermError {
public:
    explicit OverflowError(const std::string& msg) : QthermError(msg) {}
};

class ShapeMismatch : public QthermError {
public:
    explicit ShapeMismatch(const std::string& msg) : QthermError(msg) {}
};

// --- states / modular ---------------------------------------------------

class FaithfulnessError : public QthermError {
public:
    explicit FaithfulnessError(const std::string& msg) : QthermError(msg) {}
};

class NotInvariant : public QthermError {
public:
    explicit NotInvariant(const std::string& msg) : QthermError(msg) {}
};

// --- dynamics / time reversal -------------------------------------------

class IncompatibleTimeReversal : public QthermError {
public:
    explicit IncompatibleTimeReversal(const std::string& msg) : QthermError(msg) {}
};

class NotTRI : public QthermError {
public:
    explicit NotTRI(const std::string& msg) : QthermError(msg) {}
};

// --- statistics ----------------------------------------------------------

class ZeroCoherence : public QthermError {
public:
    explicit ZeroCoherence(const std::string& msg) : QthermError(msg) {}
};

// --- quadrature / grids ---------------------------------------------------

class QuadratureFailure : public QthermError {
public:
    explicit QuadratureFailure(const std::string& msg) : QthermError(msg) {}
};

class GridError : public QthermError {
public:
    explicit GridError(const std::string& msg) : QthermError(msg) {}
};

// --- channels ------------------------------------------------------------

class LogBranchError : public QthermError {
public:
    explicit LogBranchError(const std::string& msg) : QthermError(msg) {}
};

// --- fermions ------------------------------------------------------------

class SymbolRangeError : public QthermError {
public:
    explicit SymbolRangeError(const std::string& msg) : QthermError(msg) {}
};

// --- CLI -----------------------------------------------------------------

class ConfigError : public QthermError {
public:
    explicit ConfigError(const std::string& msg) : QthermError(msg) {}
};

} // namespace qtherm
