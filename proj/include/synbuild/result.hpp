#pragma once

#include <optional>
#include <string>
#include <utility>

namespace synbuild {

// Lightweight success-or-diagnostic carrier for operations whose failure is a
// normal pipeline outcome (candidate rejected, placement infeasible) rather
// than a programming error.
template <class T>
class Result {
public:
    static Result ok(T value) {
        Result r;
        r.value_ = std::move(value);
        return r;
    }
    static Result fail(std::string message) {
        Result r;
        r.error_ = std::move(message);
        return r;
    }

    bool has_value() const { return value_.has_value(); }
    explicit operator bool() const { return has_value(); }

    T& value() { return *value_; }
    const T& value() const { return *value_; }
    T&& take() { return std::move(*value_); }

    const std::string& error() const { return error_; }

private:
    std::optional<T> value_;
    std::string error_;
};

}  // namespace synbuild
