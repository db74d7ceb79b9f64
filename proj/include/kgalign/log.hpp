// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGALIGN_LOG_HPP
#define KGALIGN_LOG_HPP

#include <string_view>

namespace kgalign::log {

enum class Level { Debug, Info, Warn, Error, Off };

void set_level(Level level);
Level level();

void info(std::string_view msg);
void warn(std::string_view msg);
void error(std::string_view msg);

}  // namespace kgalign::log

#endif  // KGALIGN_LOG_HPP
