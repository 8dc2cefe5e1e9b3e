#pragma once

#include <stdexcept>
#include <string>

namespace gravre {

/// Base of all library errors. `exit_code` is what the CLI returns.
class Error : public std::runtime_error {
public:
    Error(const std::string& what, int exit_code) : std::runtime_error(what), code_(exit_code) {}
    int exit_code() const noexcept { return code_; }

private:
    int code_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& w) : Error(w, 2) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& w) : Error(w, 3) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& w) : Error(w, 4) {}
};

// two masses closer than the guard distance
class CollisionError : public NumericalError {
public:
    explicit CollisionError(const std::string& w) : NumericalError(w) {}
};

class NotAnEquilibrium : public NumericalError {
public:
    explicit NotAnEquilibrium(const std::string& w) : NumericalError(w) {}
};

class SingularRadius : public ValidationError {
public:
    explicit SingularRadius(const std::string& w) : ValidationError(w) {}
};

class BelowMinimumRadius : public ValidationError {
public:
    explicit BelowMinimumRadius(const std::string& w) : ValidationError(w) {}
};

class NoSignChange : public NumericalError {
public:
    explicit NoSignChange(const std::string& w) : NumericalError(w) {}
};

class StepFailure : public NumericalError {
public:
    explicit StepFailure(const std::string& w) : NumericalError(w) {}
};

class StepUnderflow : public NumericalError {
public:
    explicit StepUnderflow(const std::string& w) : NumericalError(w) {}
};

class SeedNotOnCurve : public NumericalError {
public:
    explicit SeedNotOnCurve(const std::string& w) : NumericalError(w) {}
};

class GridTooCoarse : public NumericalError {
public:
    explicit GridTooCoarse(const std::string& w) : NumericalError(w) {}
};

class DegeneratePitchfork : public NumericalError {
public:
    explicit DegeneratePitchfork(const std::string& w) : NumericalError(w) {}
};

}  // namespace gravre
