// Copyright 2026 The fairscore Authors
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

#ifndef FAIRSCORE_FAIRSCORE_HPP_
#define FAIRSCORE_FAIRSCORE_HPP_

#include "fairscore/correction.hpp"
#include "fairscore/io.hpp"
#include "fairscore/lp_builder.hpp"
#include "fairscore/oracle.hpp"
#include "fairscore/profile_space.hpp"
#include "fairscore/reduction.hpp"
#include "fairscore/simplex.hpp"
#include "fairscore/synth.hpp"
#include "fairscore/two_pop.hpp"

#endif  // FAIRSCORE_FAIRSCORE_HPP_
