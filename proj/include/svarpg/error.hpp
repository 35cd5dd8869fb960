#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace svarpg {

enum class ErrorKind {
    Schema,
    Semantic,
    SingularContemporaneous,
    NonConvergent,
    DimensionMismatch,
    SelfPair,
    SingularAtFrequency,
    IllConditioned,
    NotIdentifiable,
    ConfoundedTarget,
    LatentPresent,
    Explosion,
    TooShort,
    WindowTooSmall,
    UnknownProcess,
};

std::string_view to_string(ErrorKind kind) noexcept;

/**
 * @brief Single exception type for every failure raised by the library.
 *
 * The kind is machine readable (the CLI maps it to a JSON error object);
 * frequency-local failures additionally carry the offending omega.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<double> omega = std::nullopt)
        : std::runtime_error(message), kind_(kind), omega_(omega) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<double> omega() const noexcept { return omega_; }

private:
    ErrorKind kind_;
    std::optional<double> omega_;
};

}  // namespace svarpg
