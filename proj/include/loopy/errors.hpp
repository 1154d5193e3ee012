#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loopy {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Raised by step_morphogens when an update leaves the finite range.
class NonFiniteError : public Error {
public:
    NonFiniteError(std::size_t cell, std::string term)
        : Error("non-finite morphogen value at cell " + std::to_string(cell) + " (" + term + ")"),
          cell_(cell), term_(std::move(term)) {}

    std::size_t cell() const { return cell_; }
    const std::string& term() const { return term_; }

private:
    std::size_t cell_;
    std::string term_;
};

class DegenerateShapeError : public Error {
public:
    using Error::Error;
};

class DegenerateConfigurationError : public Error {
public:
    using Error::Error;
};

class DegeneratePolygonError : public Error {
public:
    using Error::Error;
};

class TooShortError : public Error {
public:
    using Error::Error;
};

class DegenerateXError : public Error {
public:
    using Error::Error;
};

/// Wraps a failure raised while simulating a recorded frame.
class FrameError : public Error {
public:
    FrameError(std::size_t frame, const std::string& what)
        : Error("frame " + std::to_string(frame) + ": " + what), frame_(frame) {}

    std::size_t frame() const { return frame_; }

private:
    std::size_t frame_;
};

}  // namespace loopy
