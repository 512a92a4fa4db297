/* Copyright 2026 The cvd Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CVD_TEXT_H_
#define CVD_TEXT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cvd {

// Shortest decimal form that parses back to the identical double.
std::string FormatDouble(double value);
// Fixed number of significant digits; 17 always round-trips.
std::string FormatDouble(double value, int significant_digits);
std::string JoinDoubles(std::span<const double> values, char sep = ',');

// Throws Error(kParseError) on anything but a complete decimal number.
// `what` names the field in the message.
double ParseDouble(std::string_view text, std::string_view what);
int64_t ParseInt(std::string_view text, std::string_view what);
std::vector<double> ParseDoubleList(std::string_view text, char sep,
                                    std::string_view what);

std::vector<std::string_view> Split(std::string_view text, char sep);
std::string_view Trim(std::string_view text);
bool StartsWith(std::string_view text, std::string_view prefix);

uint64_t Fnv1a64(std::string_view bytes);
uint64_t Fnv1a64(std::span<const double> values);
std::string HexU64(uint64_t value);

// Whole-file helpers; throw Error(kIoError).
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace cvd

#endif  // CVD_TEXT_H_
