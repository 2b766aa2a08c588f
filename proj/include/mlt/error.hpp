#ifndef MLT_ERROR_HPP
#define MLT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mlt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of a trust or model operation was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Aggregation was requested with no reports at all.
class NoEvidenceError : public Error {
public:
    NoEvidenceError() : Error("no consumer or bystander reports to aggregate") {}
};

/// A scenario file could not be parsed into the expected structure.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A well-formed scenario breaks one or more model invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& item : items) {
            if (!out.empty()) out += "; ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

}  // namespace mlt

#endif  // MLT_ERROR_HPP
