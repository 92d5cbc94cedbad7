# Copyright (c) 2026 The eptpinn Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Physics-informed reconstruction of electrical properties from B1+ maps."""

from eptpinn._core import (
    __version__,
    evaluate,
    export_slice,
    generate,
    load_dataset,
    pnae,
    pnae_complex,
    sample,
    train,
)

__all__ = [
    "__version__",
    "evaluate",
    "export_slice",
    "generate",
    "load_dataset",
    "pnae",
    "pnae_complex",
    "sample",
    "train",
]
