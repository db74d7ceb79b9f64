# Copyright 2026 The kgalign Authors.
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
"""Python bindings for the kgalign entity alignment library."""

from ._core import (
    ConfigError,
    DataError,
    Error,
    NumericError,
    abstract_attribute_value,
    combine_ranks,
    default_config,
    generate,
    label_similarity,
    levenshtein,
    load_checkpoint,
    normalize_config,
    rank_targets,
    run_pipeline,
    score_triple,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Error",
    "NumericError",
    "abstract_attribute_value",
    "combine_ranks",
    "default_config",
    "generate",
    "label_similarity",
    "levenshtein",
    "load_checkpoint",
    "normalize_config",
    "rank_targets",
    "run_pipeline",
    "score_triple",
]
