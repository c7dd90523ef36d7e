// Copyright 2026 The curvlab Authors.
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

// Umbrella header.

#pragma once

#include "curvlab/bounds.hpp"
#include "curvlab/chain.hpp"
#include "curvlab/coupling_sim.hpp"
#include "curvlab/entropy.hpp"
#include "curvlab/error.hpp"
#include "curvlab/metric.hpp"
#include "curvlab/models/birth_death.hpp"
#include "curvlab/models/exclusion.hpp"
#include "curvlab/models/glauber.hpp"
#include "curvlab/models/interchange.hpp"
#include "curvlab/models/zero_range.hpp"
#include "curvlab/transport.hpp"
