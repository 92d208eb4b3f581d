/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/
#pragma once

#include "skmon/assign.hpp"
#include "skmon/cost_model.hpp"
#include "skmon/generator.hpp"
#include "skmon/geometry.hpp"
#include "skmon/init_stats.hpp"
#include "skmon/partition.hpp"
#include "skmon/reports.hpp"
#include "skmon/rng.hpp"
#include "skmon/runtime.hpp"
#include "skmon/stream_io.hpp"
#include "skmon/types.hpp"
#include "skmon/worker.hpp"
