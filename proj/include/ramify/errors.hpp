#pragma once

#include <stdexcept>
#include <string>

namespace ramify {

/// Bad caller input: malformed parameters, violated preconditions, catalog gaps.
/// Carries a short machine-readable code alongside the message.
class input_error : public std::invalid_argument {
public:
    input_error(std::string code, const std::string& what)
        : std::invalid_argument(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// An enumeration would exceed the configured size guard.
class guard_error : public input_error {
public:
    explicit guard_error(const std::string& what) : input_error("guard_exceeded", what) {}
};

/// A consistency check inside the library failed. Always a bug or a bad
/// catalog entry, never a user error.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void check_internal(bool cond, const char* what) {
    if (!cond) throw internal_error(what);
}

}  // namespace ramify
