#pragma once

#include <stdexcept>
#include <string>

namespace lpdes {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidTable : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class NotDefinite : public Error {
public:
    using Error::Error;
};

class TooManyAtoms : public Error {
public:
    using Error::Error;
};

class UnassignedVariable : public Error {
public:
    using Error::Error;
};

class MustMinimizeFirst : public Error {
public:
    using Error::Error;
};

// A contradiction was derived while simplifying or translating an instance.
class InconsistentInstance : public Error {
public:
    using Error::Error;
};

class TightnessRequired : public Error {
public:
    using Error::Error;
};

class ResourceLimitExceeded : public Error {
public:
    using Error::Error;
};

} // namespace lpdes
