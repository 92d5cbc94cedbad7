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

#pragma once

#include <cstddef>

namespace eptpinn::detail {

/// sin and cos of every element of x. Compiled in its own translation unit
/// with vector-math flags so glibc's libmvec kernels are used when the
/// toolchain provides them; elsewhere it degrades to scalar libm calls.
/// Buffers must not overlap.
void vsincos(const double* x, double* s, double* c, std::ptrdiff_t n);

}  // namespace eptpinn::detail
