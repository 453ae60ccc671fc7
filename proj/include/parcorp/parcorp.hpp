// Copyright 2026 The parcorp Authors.
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

// Everything, for tools and tests.

#pragma once

#include "parcorp/adaptation/adapt.hpp"
#include "parcorp/admin/authorization.hpp"
#include "parcorp/admin/codec.hpp"
#include "parcorp/admin/project.hpp"
#include "parcorp/admin/types.hpp"
#include "parcorp/annotation/edit.hpp"
#include "parcorp/annotation/lexicon.hpp"
#include "parcorp/annotation/tagging.hpp"
#include "parcorp/cli/dispatch.hpp"
#include "parcorp/corpus/format.hpp"
#include "parcorp/corpus/parallel.hpp"
#include "parcorp/corpus/tokenize.hpp"
#include "parcorp/corpus/types.hpp"
#include "parcorp/error.hpp"
#include "parcorp/qa/agreement.hpp"
#include "parcorp/service/archive.hpp"
#include "parcorp/service/event_store.hpp"
#include "parcorp/service/export.hpp"
#include "parcorp/service/http.hpp"
#include "parcorp/service/router.hpp"
#include "parcorp/service/service.hpp"
#include "parcorp/translation/dictionary.hpp"
#include "parcorp/util/crypto.hpp"
#include "parcorp/util/ratio.hpp"
#include "parcorp/util/strings.hpp"
#include "parcorp/util/time.hpp"
#include "parcorp/util/unicode.hpp"
