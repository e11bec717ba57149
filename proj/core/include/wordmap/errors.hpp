#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wordmap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument value supplied by the caller (range, dimension mismatch).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Input data could not be used: malformed files, unknown words, empty sets.
class DataError : public Error {
public:
    using Error::Error;
};

/// An error tied to a position in a text input.
class LineError : public DataError {
public:
    LineError(const std::string& what, std::size_t line)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IngestionError : public LineError {
public:
    using LineError::LineError;
};

class ParseError : public LineError {
public:
    using LineError::LineError;
};

class FormatError : public LineError {
public:
    using LineError::LineError;
};

class EncodingError : public DataError {
public:
    using DataError::DataError;
};

class LookupError : public DataError {
public:
    using DataError::DataError;
};

class TrainingError : public DataError {
public:
    using DataError::DataError;
};

class AlignmentError : public DataError {
public:
    using DataError::DataError;
};

class EvaluationError : public DataError {
public:
    using DataError::DataError;
};

/// Optimisation produced non-finite values.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t epoch)
        : Error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

}  // namespace wordmap
