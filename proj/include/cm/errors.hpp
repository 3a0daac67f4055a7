#ifndef CM_ERRORS_HPP
#define CM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cm {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotInvertible : Error {
    explicit NotInvertible(const std::string& msg) : Error(msg) {}
};

struct DuplicateRoots : Error {
    explicit DuplicateRoots(const std::string& msg) : Error(msg) {}
};

struct DivideByZero : Error {
    explicit DivideByZero(const std::string& msg) : Error(msg) {}
};

struct LimitExceeded : Error {
    explicit LimitExceeded(const std::string& msg) : Error(msg) {}
};

struct InsufficientPrimes : Error {
    explicit InsufficientPrimes(const std::string& msg) : Error(msg) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

struct WalkError : Error {
    explicit WalkError(const std::string& msg) : Error(msg) {}
};

struct NotFound : Error {
    explicit NotFound(const std::string& msg) : Error(msg) {}
};

struct OrderMismatch : Error {
    explicit OrderMismatch(const std::string& msg) : Error(msg) {}
};

struct NoValidRoot : Error {
    explicit NoValidRoot(const std::string& msg) : Error(msg) {}
};

} // namespace cm

#endif
