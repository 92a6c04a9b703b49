// SPDX-License-Identifier: Apache-2.0
// Umbrella header: the whole fatty-pancreas classification library.
#pragma once

#include "steato/annotations.hpp"
#include "steato/error.hpp"
#include "steato/eval.hpp"
#include "steato/image.hpp"
#include "steato/learners.hpp"
#include "steato/manifest.hpp"
#include "steato/parallel.hpp"
#include "steato/patches.hpp"
#include "steato/patientvec.hpp"
#include "steato/phantom.hpp"
#include "steato/pipeline.hpp"
#include "steato/png_io.hpp"
#include "steato/polygon.hpp"
#include "steato/rng.hpp"
#include "steato/stats.hpp"
#include "steato/texture.hpp"
