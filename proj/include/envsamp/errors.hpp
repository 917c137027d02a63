// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace envsamp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unrecognized or structurally broken file contents (bad magic, bad header,
// truncation, unsupported version).
struct FormatError : Error {
    using Error::Error;
};

// Structurally valid file with unusable payload (NaN/Inf pixels).
struct DataError : Error {
    using Error::Error;
};

// Failure to open, read, or write a file.
struct IoError : Error {
    using Error::Error;
};

// A loaded importance table that violates its invariants.
struct CorruptionError : Error {
    using Error::Error;
};

// Table construction cannot proceed (zero total importance).
struct BuildError : Error {
    using Error::Error;
};

// Invalid argument combination passed to a library entry point.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace envsamp
