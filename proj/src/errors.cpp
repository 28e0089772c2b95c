#include "willmore/errors.hpp"

namespace willmore {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::rank: return "rank";
        case ErrorKind::causality: return "causality";
        case ErrorKind::validation: return "validation";
        case ErrorKind::plane_not_sphere: return "plane_not_sphere";
        case ErrorKind::degenerate_immersion: return "degenerate_immersion";
        case ErrorKind::pole_on_surface: return "pole_on_surface";
        case ErrorKind::diffeomorphism_failure: return "diffeomorphism_failure";
        case ErrorKind::umbilic_circle: return "umbilic_circle";
        case ErrorKind::not_spacelike: return "not_spacelike";
        case ErrorKind::search_failure: return "search_failure";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::size: return "size";
        case ErrorKind::degenerate_fit: return "degenerate_fit";
        case ErrorKind::domain: return "domain";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace willmore
