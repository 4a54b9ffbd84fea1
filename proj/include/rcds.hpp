// Copyright 2026 The rcds Authors.
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

#include "rcds/bitset.hpp"
#include "rcds/bounds.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/harness.hpp"
#include "rcds/instance_io.hpp"
#include "rcds/instances.hpp"
#include "rcds/oracle.hpp"
#include "rcds/parallel.hpp"
#include "rcds/policies.hpp"
#include "rcds/polymatroid.hpp"
#include "rcds/rational.hpp"
#include "rcds/scenario.hpp"
#include "rcds/steiner.hpp"
