#pragma once

#include <stdexcept>
#include <string>

namespace covalign {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: bad file syntax, unknown symbols, invalid graph structure.
struct ParseError : Error {
    using Error::Error;
};
struct CyclicGraph : ParseError {
    using ParseError::ParseError;
};

// A guarded enumeration would exceed its size limit.
struct InstanceTooLarge : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};
struct UnsupportedOptions : Error {
    using Error::Error;
};

struct NotASubsequence : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct EmptyString : Error {
    using Error::Error;
};
struct EmptyAlignment : Error {
    using Error::Error;
};
struct NonUniqueSink : Error {
    using Error::Error;
};
struct NonUniqueSource : Error {
    using Error::Error;
};
struct InvalidPath : Error {
    using Error::Error;
};
struct NotCoverable : Error {
    using Error::Error;
};
struct CoverViolated : Error {
    using Error::Error;
};
struct DisjointnessViolated : Error {
    using Error::Error;
};

struct ImpossibleParameters : Error {
    using Error::Error;
};
struct RetriesExhausted : Error {
    using Error::Error;
};
struct ParameterMismatch : Error {
    using Error::Error;
};
struct NotCommonSubsequence : Error {
    using Error::Error;
};
struct ConstructionMismatch : Error {
    using Error::Error;
};
struct NoCanonicalInterval : Error {
    using Error::Error;
};
struct MissingColumnMetadata : Error {
    using Error::Error;
};

}  // namespace covalign
