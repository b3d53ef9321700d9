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

#include "ivsr/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace ivsr {
namespace {

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto r = std::from_chars(s.data() + pos, s.data() + pos + count, out);
  return r.ec == std::errc{};
}

std::optional<Timestamp> compose(int y, int mo, int d, int h, int mi, int sec, int frac) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) return std::nullopt;
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t secs = (static_cast<std::int64_t>(h) * 60 + mi) * 60 + sec;
  return Timestamp{days * kMicrosPerDay + secs * 1'000'000 + frac};
}

}  // namespace

std::optional<Timestamp> Timestamp::parse(std::string_view s) {
  // 0123456789012345678901234
  // YYYY-MM-DD HH:MM:SS.ffffff
  if (s.size() != 26 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':' ||
      s[16] != ':' || s[19] != '.') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, sec, frac;
  if (!read_digits(s, 0, 4, y) || !read_digits(s, 5, 2, mo) || !read_digits(s, 8, 2, d) ||
      !read_digits(s, 11, 2, h) || !read_digits(s, 14, 2, mi) || !read_digits(s, 17, 2, sec) ||
      !read_digits(s, 20, 6, frac)) {
    return std::nullopt;
  }
  return compose(y, mo, d, h, mi, sec, frac);
}

std::optional<Timestamp> Timestamp::parse_loose(std::string_view s) {
  if (s.size() == 26) return parse(s);
  int y, mo, d, h = 0, mi = 0, sec = 0;
  if (s.size() != 10 && s.size() != 19) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || !read_digits(s, 0, 4, y) || !read_digits(s, 5, 2, mo) ||
      !read_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  if (s.size() == 19) {
    if (s[10] != ' ' || s[13] != ':' || s[16] != ':' || !read_digits(s, 11, 2, h) ||
        !read_digits(s, 14, 2, mi) || !read_digits(s, 17, 2, sec)) {
      return std::nullopt;
    }
  }
  return compose(y, mo, d, h, mi, sec, 0);
}

Timestamp Timestamp::from_seconds(double seconds) {
  return Timestamp{static_cast<std::int64_t>(std::llround(seconds * 1e6))};
}

std::string Timestamp::to_string() const {
  using namespace std::chrono;
  std::int64_t days = micros / kMicrosPerDay;
  std::int64_t rem = micros % kMicrosPerDay;
  if (rem < 0) {
    rem += kMicrosPerDay;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  const std::int64_t secs = rem / 1'000'000;
  const std::int64_t frac = rem % 1'000'000;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld.%06lld",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60), static_cast<long long>(secs % 60),
                static_cast<long long>(frac));
  return buf;
}

}  // namespace ivsr
