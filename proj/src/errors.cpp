#include "crh/errors.hpp"

namespace crh {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out = "invalid mission";
    for (const auto& s : items) out += "\n  " + s;
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join(violations)), violations_(std::move(violations)) {}

ParseError::ParseError(std::string field, const std::string& message)
    : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

}  // namespace crh
