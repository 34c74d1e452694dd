// Copyright 2026 The gapsvt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAPSVT_EXECUTION_H_
#define GAPSVT_EXECUTION_H_

namespace gapsvt {

// kSerial is the reference path kept for testing; kParallel fans the same
// loop out over OpenMP threads. Both produce the same results up to the
// order of floating-point summation.
enum class ExecutionPolicy { kSerial, kParallel };

// Number of OpenMP threads kParallel will use.
int ParallelThreads();

}  // namespace gapsvt

#endif  // GAPSVT_EXECUTION_H_
