// Copyright 2026 The kcat0 Authors.
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

#include "kcat0/cat0.hpp"
#include "kcat0/convexity.hpp"
#include "kcat0/core.hpp"
#include "kcat0/defining_function.hpp"
#include "kcat0/domain.hpp"
#include "kcat0/limits.hpp"
#include "kcat0/metric.hpp"
#include "kcat0/planar.hpp"
