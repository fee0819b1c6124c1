#include "ectshape/error.hpp"

namespace ectshape {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::EmptyRecord: return "EmptyRecord";
        case ErrorCode::NonFiniteSample: return "NonFiniteSample";
        case ErrorCode::DuplicatePath: return "DuplicatePath";
        case ErrorCode::FileUnreadable: return "FileUnreadable";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::DegenerateAfterTrim: return "DegenerateAfterTrim";
        case ErrorCode::EmptyCloud: return "EmptyCloud";
        case ErrorCode::DegenerateCloud: return "DegenerateCloud";
        case ErrorCode::DegenerateMoments: return "DegenerateMoments";
        case ErrorCode::CollinearCloud: return "CollinearCloud";
        case ErrorCode::ZeroWidth: return "ZeroWidth";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorCode::BadModelFile: return "BadModelFile";
        case ErrorCode::BadK: return "BadK";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::BadSpec: return "BadSpec";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    std::optional<std::size_t> line) {
    std::string out(to_string(code));
    if (line) {
        out += " (line " + std::to_string(*line) + ")";
    }
    if (!message.empty()) {
        out += ": " + message;
    }
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(compose(code, message, line)), code_(code), line_(line) {}

Error Error::annotated(std::string_view context) const {
    Error copy = *this;
    static_cast<std::runtime_error&>(copy) =
        std::runtime_error(std::string(context) + ": " + what());
    return copy;
}

}  // namespace ectshape
