// Copyright 2026 The Fare Alliance Authors
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

#include "alliance/allocation.hpp"
#include "alliance/bayes_opt.hpp"
#include "alliance/casegen.hpp"
#include "alliance/choice.hpp"
#include "alliance/common.hpp"
#include "alliance/config_json.hpp"
#include "alliance/descent.hpp"
#include "alliance/evaluator.hpp"
#include "alliance/game.hpp"
#include "alliance/gp.hpp"
#include "alliance/graph.hpp"
#include "alliance/instance_json.hpp"
#include "alliance/milp.hpp"
#include "alliance/model.hpp"
#include "alliance/report.hpp"
#include "alliance/second_stage.hpp"
#include "alliance/solve.hpp"
#include "alliance/sos2.hpp"
