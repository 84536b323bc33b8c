// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace rrg {

// Reserved token ids, fixed across vocabulary builds.
inline constexpr std::size_t kBosId = 0;
inline constexpr std::size_t kEosId = 1;
inline constexpr std::size_t kPadId = 2;
inline constexpr std::size_t kUnkId = 3;
inline constexpr std::size_t kReservedTokens = 4;

}  // namespace rrg
