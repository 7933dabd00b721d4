/*
 *   Copyright 2026 The evcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/** @file Umbrella header. */

#ifndef EVCOMB_EVCOMB_HPP
#define EVCOMB_EVCOMB_HPP

#include "analysis.hpp"
#include "combiner.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "generators.hpp"
#include "interval.hpp"
#include "io.hpp"
#include "operators.hpp"

#endif // EVCOMB_EVCOMB_HPP
