#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a structural invariant (bad gluing, bad matching, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed input document; the message starts with the location.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Operands live over different homology lattices.
class LatticeMismatch : public Error {
public:
    LatticeMismatch() : Error("lattice mismatch") {}
    explicit LatticeMismatch(const std::string& what) : Error("lattice mismatch: " + what) {}
};

/// Collected findings of a validate() call; empty means ok.
struct Diagnostics {
    std::vector<std::string> messages;

    bool ok() const { return messages.empty(); }
    void add(std::string msg) { messages.push_back(std::move(msg)); }

    template <typename... Args>
    void addf(Args&&... args)
    {
        std::ostringstream os;
        (os << ... << args);
        messages.push_back(os.str());
    }

    /// Throws ValidationError carrying the first message, if any.
    void raise_if_failed(const std::string& what) const
    {
        if (!ok()) {
            throw ValidationError(what + ": " + messages.front());
        }
    }
};

} // namespace sqft
