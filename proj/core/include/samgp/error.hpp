#pragma once

#include <stdexcept>
#include <string>

namespace samgp {

// Invalid run, variation or sampling parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A tree that cannot be evaluated on the given data (e.g. feature index out of range)
// or a malformed serialized tree.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IngestionError : public std::runtime_error {
public:
    enum class Kind { Io, Parse, NonFinite, MissingTarget, Shape };

    IngestionError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace samgp
