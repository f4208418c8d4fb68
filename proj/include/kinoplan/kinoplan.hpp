// Copyright 2026 The Kinoplan Authors
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

// Umbrella header for the whole library.

#ifndef KINOPLAN_KINOPLAN_HPP
#define KINOPLAN_KINOPLAN_HPP

#include "kinoplan/types.hpp"
#include "kinoplan/flatness.hpp"
#include "kinoplan/polynomial.hpp"
#include "kinoplan/primitive.hpp"
#include "kinoplan/feasibility.hpp"
#include "kinoplan/kdtree.hpp"
#include "kinoplan/collision.hpp"
#include "kinoplan/lqmt.hpp"
#include "kinoplan/search.hpp"
#include "kinoplan/refine.hpp"
#include "kinoplan/scenarios.hpp"
#include "kinoplan/benchmark.hpp"
#include "kinoplan/io.hpp"

#endif  // KINOPLAN_KINOPLAN_HPP
