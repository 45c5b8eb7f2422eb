#pragma once

#include <stdexcept>
#include <string>

namespace dom2 {

// Error taxonomy. The CLI maps these onto distinct exit codes
// (usage=2, io=3, schema=4); everything else is a ContractError.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

#define DOM2_REQUIRE(cond, msg)                         \
    do {                                                \
        if (!(cond)) throw ::dom2::ContractError(msg);  \
    } while (0)

} // namespace dom2
