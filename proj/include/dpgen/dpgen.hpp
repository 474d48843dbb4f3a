// Copyright 2026 The dpgen Authors
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


// Umbrella header.

#pragma once

#include "dpgen/bmv2.hpp"
#include "dpgen/dag.hpp"
#include "dpgen/error.hpp"
#include "dpgen/lanes.hpp"
#include "dpgen/native.hpp"
#include "dpgen/payload_memory.hpp"
#include "dpgen/pipeline.hpp"
#include "dpgen/report.hpp"
#include "dpgen/rtl/design.hpp"
#include "dpgen/rtl/identifiers.hpp"
#include "dpgen/rtl/vhdl.hpp"
#include "dpgen/sim/frame.hpp"
#include "dpgen/sim/golden.hpp"
#include "dpgen/sim/latency.hpp"
#include "dpgen/sim/simulator.hpp"
#include "dpgen/sim/stimulus_io.hpp"
#include "dpgen/source.hpp"
#include "dpgen/valid_bits.hpp"
