// Copyright 2026 The coutil Authors
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

#ifndef COUTIL_COUTIL_HPP_
#define COUTIL_COUTIL_HPP_

#include "coutil/anon_query.hpp"
#include "coutil/coordination.hpp"
#include "coutil/core.hpp"
#include "coutil/game.hpp"
#include "coutil/io.hpp"
#include "coutil/protocol.hpp"
#include "coutil/simulation.hpp"

#endif  // COUTIL_COUTIL_HPP_
