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

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace relent {

/// Rejects any key of object j not listed in allowed (strict schemas).
void require_keys_subset(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                         std::string_view context);

/// Fetches a required key, throwing PreconditionError naming context if absent.
const nlohmann::json& require_key(const nlohmann::json& j, std::string_view key, std::string_view context);

}  // namespace relent
