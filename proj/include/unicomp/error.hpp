// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace unicomp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A feature vector, row or frame mean has zero norm, so cosine similarity is undefined.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Caller-supplied arguments or configuration are inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A serialized container or document is malformed.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace unicomp
