// Copyright 2026 The IVSR Authors.
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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ivsr {

// Naive wall-clock time with microsecond resolution, as printed by the
// sensors ("YYYY-MM-DD HH:MM:SS.ffffff"). No time zone is attached.
struct Timestamp {
  std::int64_t micros = 0;  // since 1970-01-01 00:00:00

  auto operator<=>(const Timestamp&) const = default;

  // Accepts "YYYY-MM-DD HH:MM:SS.ffffff" (exactly six fraction digits).
  static std::optional<Timestamp> parse(std::string_view text);
  // Also accepts "YYYY-MM-DD" and "YYYY-MM-DD HH:MM:SS"; used for query bounds.
  static std::optional<Timestamp> parse_loose(std::string_view text);
  static Timestamp from_seconds(double seconds);

  std::string to_string() const;
  double seconds() const { return static_cast<double>(micros) * 1e-6; }
};

inline constexpr std::int64_t kMicrosPerDay = 86'400'000'000;

}  // namespace ivsr
