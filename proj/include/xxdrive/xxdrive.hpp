// Copyright 2026 The xxdrive Authors
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

#include "xxdrive/chain_model.hpp"
#include "xxdrive/continuum_asymptotics.hpp"
#include "xxdrive/dynamics_oracle.hpp"
#include "xxdrive/errors.hpp"
#include "xxdrive/export.hpp"
#include "xxdrive/observables.hpp"
#include "xxdrive/scaling.hpp"
#include "xxdrive/steady_state_exact.hpp"
#include "xxdrive/transport.hpp"
#include "xxdrive/weak_coupling.hpp"
