#pragma once
#include <cstdint>

namespace fjsp {

using TimeUnit = std::int64_t;
using JobId = int;      // 0-based everywhere in the API
using MachineId = int;  // 0-based at API edges; 1-based signed inside OpTable cells
using StageId = int;    // 0-based operation index within a job

inline constexpr int kNumJobRules = 6;
inline constexpr int kNumMachineRules = 2;
inline constexpr int kNumActions = kNumJobRules * kNumMachineRules;

}  // namespace fjsp
