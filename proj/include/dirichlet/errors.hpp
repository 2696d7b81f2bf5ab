// Error taxonomy for the dirichlet-lab library.
//
// Everything user-triggerable throws Error with a Kind; the CLI maps
// Kind to its exit-code contract (config/argument problems -> 2).
#pragma once

#include <stdexcept>
#include <string>

namespace dirichlet {

enum class ErrorKind {
    argument,         // bad parameter value (out of range, wrong schedule kind, ...)
    domain,           // math domain violation (s <= 1, log log of value <= e, ...)
    budget,           // requested work exceeds the configured term budget
    representability, // value underflows/overflows double precision
    schedule,         // schedule undefined at this index (k below k_min, ...)
    infeasible,       // plan cannot meet its target within the budget
    config            // malformed run configuration
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::argument: return "argument";
        case ErrorKind::domain: return "domain";
        case ErrorKind::budget: return "budget";
        case ErrorKind::representability: return "representability";
        case ErrorKind::schedule: return "schedule";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

} // namespace dirichlet
