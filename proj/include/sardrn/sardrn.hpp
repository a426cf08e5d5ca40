/* Copyright (c) 2026 The sardrn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

// Umbrella header.

#include "sardrn/conv.hpp"
#include "sardrn/conv_gradcheck.hpp"
#include "sardrn/errors.hpp"
#include "sardrn/experiment.hpp"
#include "sardrn/gradcheck.hpp"
#include "sardrn/image.hpp"
#include "sardrn/metrics.hpp"
#include "sardrn/model_io.hpp"
#include "sardrn/network.hpp"
#include "sardrn/pgm.hpp"
#include "sardrn/rng.hpp"
#include "sardrn/speckle.hpp"
#include "sardrn/tensor.hpp"
#include "sardrn/toy_images.hpp"
#include "sardrn/training.hpp"
