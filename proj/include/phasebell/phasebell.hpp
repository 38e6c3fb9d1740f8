// Copyright 2026 The phasebell Authors
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

#include "phasebell/bell.hpp"
#include "phasebell/csv.hpp"
#include "phasebell/epr.hpp"
#include "phasebell/errors.hpp"
#include "phasebell/evolution.hpp"
#include "phasebell/fourier.hpp"
#include "phasebell/grid.hpp"
#include "phasebell/kernels.hpp"
#include "phasebell/phase_space.hpp"
#include "phasebell/spin_geom.hpp"
