// Copyright 2026 The Dogwhistle Pipeline Authors.
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

#ifndef DOGWHISTLE_DATE_H_
#define DOGWHISTLE_DATE_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace dogwhistle {

// A proleptic Gregorian calendar date.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  // YYYY-MM-DD.
  std::string to_string() const;

  // Accepts an ISO-8601 calendar date, optionally followed by a time part
  // ("2021-03-04" or "2021-03-04T10:00:00Z"). Anything else is rejected.
  static std::optional<Date> parse(std::string_view text);

  static Date today();
};

}  // namespace dogwhistle

#endif  // DOGWHISTLE_DATE_H_
