// Copyright 2026 The bbcstl Authors
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

#include "bbcstl/abstraction.hpp"
#include "bbcstl/bbc.hpp"
#include "bbcstl/checker.hpp"
#include "bbcstl/config.hpp"
#include "bbcstl/equiv.hpp"
#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"
#include "bbcstl/interval.hpp"
#include "bbcstl/learner.hpp"
#include "bbcstl/mealy.hpp"
#include "bbcstl/monitor.hpp"
#include "bbcstl/parser.hpp"
#include "bbcstl/plant.hpp"
#include "bbcstl/process_adapter.hpp"
#include "bbcstl/report.hpp"
#include "bbcstl/rng.hpp"
#include "bbcstl/robustness.hpp"
#include "bbcstl/sul.hpp"
#include "bbcstl/toml_lite.hpp"
#include "bbcstl/trace.hpp"
#include "bbcstl/trace_io.hpp"
