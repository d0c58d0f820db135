// Copyright 2026 The ndf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header for the whole library.

#include "ndf/bounds.hpp"
#include "ndf/config.hpp"
#include "ndf/designs.hpp"
#include "ndf/flow.hpp"
#include "ndf/harmonics.hpp"
#include "ndf/io.hpp"
#include "ndf/mz.hpp"
#include "ndf/optimizer.hpp"
#include "ndf/partition.hpp"
#include "ndf/point.hpp"
#include "ndf/polynomial.hpp"
#include "ndf/quadrature.hpp"
#include "ndf/report.hpp"
#include "ndf/residual.hpp"
