#pragma once

#include <stdexcept>
#include <string>

namespace ctx {

/// Input exceeds a hard size cap (assignment space, element counts, ...).
class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Local valuations clash on an overlap element.
class GluingError : public std::runtime_error {
public:
    GluingError(std::string element, int left, int right)
        : std::runtime_error("gluing clash on element '" + element + "': " +
                             std::to_string(left) + " vs " + std::to_string(right)),
          element_(std::move(element)), left_(left), right_(right) {}

    const std::string& element() const { return element_; }
    int left() const { return left_; }
    int right() const { return right_; }

private:
    std::string element_;
    int left_;
    int right_;
};

/// A joint probability was requested for a non-commuting pair.
class CommensurabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The operation only supports a restricted scenario shape.
class UnsupportedShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ctx
