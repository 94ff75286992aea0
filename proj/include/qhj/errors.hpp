#pragma once

#include <stdexcept>
#include <string>

namespace qhj {

enum class ErrorKind {
    unknown_model,
    parameter_domain,
    schema,
    unsupported_expansion,
    no_admissible_assignment,
    nonlinear_in_energy,
    overflow_row,
    singular_pencil,
    grid_too_coarse,
    eigensolver_failure,
    singular_sample,
    invalid_state,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qhj
