// Copyright 2026 The hxai Authors.
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


// Plain-text rendering for terminals.

#ifndef HXAI_RENDER_HPP_
#define HXAI_RENDER_HPP_

#include <string>

#include "hxai/gbdt.hpp"
#include "hxai/session.hpp"

namespace hxai {

// Record table, similar cases, one counterexample table per alternate class
// and the importance bars. Changed cells read "old → new *".
std::string render_bundle(const ExplanationBundle& bundle, const DatasetSchema& schema);

// Signed horizontal bars, features in display order.
std::string render_importance(const ImportanceVector& importance, const DatasetSchema& schema,
                              int half_width = 20);

std::string render_report(const EvalReport& report, const DatasetSchema& schema);
std::string render_cv(const CvReport& report, const DatasetSchema& schema);

}  // namespace hxai

#endif  // HXAI_RENDER_HPP_
