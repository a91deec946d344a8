#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crh {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Carries every violation found, each prefixed with its field path.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace crh
