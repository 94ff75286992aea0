#include "qhj/errors.hpp"

namespace qhj {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::unknown_model: return "unknown_model";
        case ErrorKind::parameter_domain: return "parameter_domain";
        case ErrorKind::schema: return "schema";
        case ErrorKind::unsupported_expansion: return "unsupported_expansion";
        case ErrorKind::no_admissible_assignment: return "no_admissible_assignment";
        case ErrorKind::nonlinear_in_energy: return "nonlinear_in_energy";
        case ErrorKind::overflow_row: return "overflow_row";
        case ErrorKind::singular_pencil: return "singular_pencil";
        case ErrorKind::grid_too_coarse: return "grid_too_coarse";
        case ErrorKind::eigensolver_failure: return "eigensolver_failure";
        case ErrorKind::singular_sample: return "singular_sample";
        default: return "invalid_state";
    }
}

}  // namespace qhj
