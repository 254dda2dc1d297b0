// Copyright (c) 2026 The ADFA Authors. All Rights Reserved.
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

#include "adfa/audio_buffer.hpp"
#include "adfa/basis.hpp"
#include "adfa/engine.hpp"
#include "adfa/error.hpp"
#include "adfa/framing.hpp"
#include "adfa/io.hpp"
#include "adfa/synthetic.hpp"
#include "adfa/verify.hpp"
