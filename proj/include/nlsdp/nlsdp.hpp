// Copyright 2026 The nlsdp authors
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

// Umbrella header pulling in the whole library.

#include "nlsdp/apps/corr.hpp"
#include "nlsdp/auglag.hpp"
#include "nlsdp/core.hpp"
#include "nlsdp/frontends/bmi.hpp"
#include "nlsdp/frontends/json_input.hpp"
#include "nlsdp/frontends/pmi.hpp"
#include "nlsdp/frontends/sdpa.hpp"
#include "nlsdp/inner_solver.hpp"
#include "nlsdp/matcalc.hpp"
#include "nlsdp/outer_loop.hpp"
#include "nlsdp/penalties.hpp"
#include "nlsdp/problem.hpp"
#include "nlsdp/report.hpp"
#include "nlsdp/sym_matrix.hpp"
