/* Copyright (c) 2026 The eptpinn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

// Compiled with -fno-math-errno -ffast-math (see CMakeLists) purely so the
// compiler may emit vectorized sin/cos library calls for these loops. The
// loops themselves contain no reassociation-sensitive arithmetic.

#include "vsincos.hpp"

#include <cmath>

namespace eptpinn::detail {

void vsincos(const double* x, double* s, double* c, std::ptrdiff_t n) {
#pragma omp simd
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
  }
#pragma omp simd
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    c[i] = std::cos(x[i]);
  }
}

}  // namespace eptpinn::detail
