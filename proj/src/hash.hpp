// Copyright 2026 The demodebias Authors
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

// SHA-256 content hashes for output artifacts.

#ifndef DEMODEBIAS_HASH_HPP_
#define DEMODEBIAS_HASH_HPP_

#include <string>
#include <string_view>

namespace demodebias {

// Lower-case hex digest.
std::string Sha256Hex(std::string_view data);
std::string Sha256File(const std::string& path);

}  // namespace demodebias

#endif  // DEMODEBIAS_HASH_HPP_
