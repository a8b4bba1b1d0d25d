#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoglove {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Coordinate outside [-90,90] x [-180,180].
class RangeError : public ParseError {
public:
    using ParseError::ParseError;
};

class DuplicateDocumentId : public Error {
public:
    using Error::Error;
};

class EmptyVocabulary : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonFiniteLoss : public Error {
public:
    NonFiniteLoss(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

class EmptyMineSet : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class NonFiniteValue : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class KindMismatch : public Error {
public:
    using Error::Error;
};

class ZeroVector : public Error {
public:
    using Error::Error;
};

class UnknownKeyword : public Error {
public:
    explicit UnknownKeyword(const std::string& keyword)
        : Error("keyword '" + keyword + "' is not in the embedding vocabulary"), keyword_(keyword) {}
    const std::string& keyword() const noexcept { return keyword_; }

private:
    std::string keyword_;
};

class EmptyRows : public Error {
public:
    using Error::Error;
};

}  // namespace geoglove
