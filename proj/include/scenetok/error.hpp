// Copyright (C) 2026 The scenetok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace scenetok {

enum class ErrorKind {
    Format,      // malformed on-disk data (magic, rank, dims)
    Length,      // truncated or oversized payload
    Validation,  // value violates a type invariant (NaN, bad timestamps, ...)
    Parameter,   // caller passed an infeasible argument
    Degenerate,  // mathematically undefined input (zero-norm vector)
    Io,
    Parse,       // JSON / text parse failure
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), m_kind(kind) {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) {
        throw Error(kind, message);
    }
}

}  // namespace scenetok
