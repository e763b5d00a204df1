/*
 * Copyright 2026 The Hyperstab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include "hyperstab/corpus.hpp"
#include "hyperstab/energy.hpp"
#include "hyperstab/error.hpp"
#include "hyperstab/expm.hpp"
#include "hyperstab/feedback.hpp"
#include "hyperstab/harness.hpp"
#include "hyperstab/io.hpp"
#include "hyperstab/lti.hpp"
#include "hyperstab/polynomial.hpp"
#include "hyperstab/rational.hpp"
#include "hyperstab/realness.hpp"
#include "hyperstab/signal.hpp"
