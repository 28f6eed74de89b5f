// Copyright 2026 The relent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relent/json_util.hpp"

#include <algorithm>

#include "relent/error.hpp"

namespace relent {

void require_keys_subset(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                         std::string_view context) {
  if (!j.is_object()) {
    throw PreconditionError(std::string(context) + ": expected a JSON object");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw PreconditionError(std::string(context) + ": unknown field '" + item.key() + "'");
    }
  }
}

const nlohmann::json& require_key(const nlohmann::json& j, std::string_view key, std::string_view context) {
  const std::string k(key);
  if (!j.is_object() || !j.contains(k)) {
    throw PreconditionError(std::string(context) + ": missing required field '" + k + "'");
  }
  return j.at(k);
}

}  // namespace relent
