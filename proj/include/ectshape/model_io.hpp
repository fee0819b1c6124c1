#pragma once

#include "ectshape/classifiers.hpp"

#include <string>
#include <string_view>

namespace ectshape {

inline constexpr std::string_view kModelMagic = "ectshape-model";
inline constexpr int kModelFormatVersion = 1;

/// Versioned line-oriented text. Leading '#' lines carry `header_comment`;
/// the first non-comment line is "ectshape-model v1 <kind>". Every real
/// number is written at 17 significant digits so load(save(m)) reproduces m
/// bit for bit.
std::string save_model(const TrainedModel& model, std::string_view header_comment = {});

/// Throws Error(BadModelFile) on any structural problem.
TrainedModel load_model(std::string_view text);

}  // namespace ectshape
