// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "ctcprep/audio.hpp"
#include "ctcprep/config.hpp"
#include "ctcprep/corpus.hpp"
#include "ctcprep/ctc.hpp"
#include "ctcprep/error.hpp"
#include "ctcprep/eval.hpp"
#include "ctcprep/review.hpp"
#include "ctcprep/textnorm.hpp"
