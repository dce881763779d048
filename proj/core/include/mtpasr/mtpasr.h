/*
 * Copyright 2026 The mtpasr Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "mtpasr/acceptance.h"
#include "mtpasr/defaults.h"
#include "mtpasr/distribution.h"
#include "mtpasr/greedy.h"
#include "mtpasr/linear_model.h"
#include "mtpasr/longform.h"
#include "mtpasr/metrics.h"
#include "mtpasr/model_io.h"
#include "mtpasr/mtp_loss.h"
#include "mtpasr/records_io.h"
#include "mtpasr/rover.h"
#include "mtpasr/step_model.h"
#include "mtpasr/table_model.h"
#include "mtpasr/text_normalize.h"
#include "mtpasr/trainer.h"
#include "mtpasr/verified_decoder.h"
