// Copyright 2026 The relwmd Authors.
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

#ifndef RELWMD_RELWMD_H_
#define RELWMD_RELWMD_H_

#include "relwmd/cache.h"
#include "relwmd/corpus.h"
#include "relwmd/distances.h"
#include "relwmd/embeddings.h"
#include "relwmd/eval.h"
#include "relwmd/evaluator.h"
#include "relwmd/flow.h"
#include "relwmd/pull_matrix.h"

#endif  // RELWMD_RELWMD_H_
