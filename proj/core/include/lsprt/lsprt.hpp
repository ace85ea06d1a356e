#pragma once

// Umbrella header.
#include "lsprt/data.hpp"
#include "lsprt/error.hpp"
#include "lsprt/eval.hpp"
#include "lsprt/io.hpp"
#include "lsprt/kernel.hpp"
#include "lsprt/klfit.hpp"
#include "lsprt/scorer.hpp"
#include "lsprt/sprt.hpp"
#include "lsprt/waldboost.hpp"
#include "lsprt/wkdrf.hpp"

namespace lsprt {

inline constexpr const char* kVersion = "0.3.0";

} // namespace lsprt
