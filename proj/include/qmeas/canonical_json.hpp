// Copyright 2026 The qmeas Authors.
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

#pragma once

#include <string>

#include <json.hpp>

namespace qmeas {

/// Deterministic JSON text: object keys sorted, two-space indent, every
/// floating-point number written with 17 significant digits (%.17g), NaN and
/// infinities written as null.
std::string dump_canonical(const nlohmann::json& j);

} // namespace qmeas
