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

#ifndef CVD_CLI_H_
#define CVD_CLI_H_

#include <iosfwd>

namespace cvd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

// Entry point of the cvd tool. Subcommands: ingest, launder, featurize,
// train, evaluate, report.
int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cvd

#endif  // CVD_CLI_H_
