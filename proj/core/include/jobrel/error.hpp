#pragma once

#include <stdexcept>
#include <string>

namespace jobrel {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration supplied by the caller (CLI exit code 1).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed, inconsistent or missing input data (CLI exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

/// A stage was asked to run before the stage that produces its input.
class MissingArtifactError : public DataError {
public:
    MissingArtifactError(const std::string& artifact, const std::string& stage)
        : DataError("missing artifact '" + artifact + "': run `" + stage + "` first"),
          artifact_(artifact), stage_(stage) {}

    const std::string& artifact() const noexcept { return artifact_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string artifact_;
    std::string stage_;
};

} // namespace jobrel
