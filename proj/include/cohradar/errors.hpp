#pragma once

#include <stdexcept>
#include <string>

namespace cohradar {

// Config/schema violations (unknown keys, wrong types, missing fields).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures (fit infeasible, estimation impossible).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes used by the CLI.
enum ExitCode {
    kExitOk = 0,
    kExitUsage = 1,
    kExitSchema = 2,
    kExitPrecondition = 3,
    kExitNumerical = 4,
    kExitIo = 5,
};

} // namespace cohradar
