// Copyright 2026 The littlebig Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "littlebig/resource.hpp"

namespace littlebig::testing {

/// A job whose every sample equals use.
inline JobSpec constant_job(std::string id, ResourceVector requested, ResourceVector use,
                            std::int64_t duration) {
  return {std::move(id), requested,
          UsageTrace{std::vector<ResourceVector>(static_cast<std::size_t>(duration), use)},
          duration};
}

inline JobSpec traced_job(std::string id, ResourceVector requested,
                          std::vector<ResourceVector> samples) {
  const auto n = static_cast<std::int64_t>(samples.size());
  return {std::move(id), requested, UsageTrace{std::move(samples)}, n};
}

}  // namespace littlebig::testing
