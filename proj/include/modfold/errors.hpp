#pragma once

#include <stdexcept>
#include <string>

namespace modfold {

// Error taxonomy: usage errors are caller mistakes (bad arguments, schema
// violations), domain errors are invalid values inside otherwise valid calls
// (non-finite inputs), numerical errors are failures of the computation
// itself (loss of positive definiteness, infeasible searches, overflow),
// internal errors are broken invariants that should never be reachable.

class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}
