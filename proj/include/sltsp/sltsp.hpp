// Copyright 2026 The sublinear-tsp Authors
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

#include "sltsp/edge_copy.hpp"
#include "sltsp/estimators.hpp"
#include "sltsp/exact.hpp"
#include "sltsp/experiment.hpp"
#include "sltsp/generators.hpp"
#include "sltsp/graph.hpp"
#include "sltsp/hat_graph.hpp"
#include "sltsp/metric.hpp"
#include "sltsp/oracle.hpp"
#include "sltsp/permutation.hpp"
#include "sltsp/port_greedy.hpp"
#include "sltsp/views.hpp"
