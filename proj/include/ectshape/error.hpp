#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ectshape {

enum class ErrorCode {
    // signal_ingest
    MalformedLine,
    EmptyRecord,
    NonFiniteSample,
    DuplicatePath,
    FileUnreadable,
    // preprocess
    TooFewSamples,
    DegenerateAfterTrim,
    // shape_geometry
    EmptyCloud,
    DegenerateCloud,
    DegenerateMoments,
    CollinearCloud,
    ZeroWidth,
    // classifiers
    EmptyClass,
    EmptyDataset,
    DimensionMismatch,
    NonFiniteLoss,
    BadModelFile,
    // evaluation
    BadK,
    LengthMismatch,
    LabelOutOfRange,
    EmptyMatrix,
    BadSpec,
    // generic precondition failure
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `code` is stable and meant for
/// matching; the message carries human-readable context.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> line = std::nullopt);

    ErrorCode code() const noexcept { return code_; }

    /// 1-based source line for text-parsing errors.
    std::optional<std::size_t> line() const noexcept { return line_; }

    /// Same error with `context` prepended to the message.
    Error annotated(std::string_view context) const;

private:
    ErrorCode code_;
    std::optional<std::size_t> line_;
};

}  // namespace ectshape
