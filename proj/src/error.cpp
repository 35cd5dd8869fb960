#include "svarpg/error.hpp"

namespace svarpg {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Schema: return "SchemaError";
        case ErrorKind::Semantic: return "SemanticError";
        case ErrorKind::SingularContemporaneous: return "SingularContemporaneous";
        case ErrorKind::NonConvergent: return "NonConvergent";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::SelfPair: return "SelfPair";
        case ErrorKind::SingularAtFrequency: return "SingularAtFrequency";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::NotIdentifiable: return "NotIdentifiable";
        case ErrorKind::ConfoundedTarget: return "ConfoundedTarget";
        case ErrorKind::LatentPresent: return "LatentPresent";
        case ErrorKind::Explosion: return "Explosion";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::UnknownProcess: return "UnknownProcess";
    }
    return "Error";
}

}  // namespace svarpg
