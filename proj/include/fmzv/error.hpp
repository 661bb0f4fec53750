#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fmzv {

enum class Errc {
    ZeroInverse,
    SharedFactor,
    LevelSharesFactor,
    ArityMismatch,
    PoleAtVonStaudtClausen,
    ScanExhausted,
    ScanCapExceeded,
    InvalidWeight,
    InvalidArgument,
    LevelMismatch,
    EmptyRange,
    CheckpointMismatch,
    MethodDisagreement,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), position_(position) {}

    Errc code() const noexcept { return code_; }

    // Offending element for batch operations.
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    Errc code_;
    std::optional<std::size_t> position_;
};

} // namespace fmzv
