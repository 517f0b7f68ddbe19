// Copyright 2026 The cgstitch Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// codec.hpp -- canonical JSON for partial and full call graphs.
//
// Canonical means: object keys sorted, lists in a fixed order derived from
// their identities, integers only. Equal values always serialize to equal
// bytes.

#ifndef CGSTITCH_CODEC_HPP
#define CGSTITCH_CODEC_HPP

#include <string>

#include "cgstitch/partial.hpp"
#include "cgstitch/stitch.hpp"
#include "json.hpp"

namespace cgstitch {

using Json = nlohmann::json;

Json partial_to_json(const PartialCG& pcg);
// Throws Error(CorruptEntry) on any schema or invariant violation,
// including a formatVersion other than kPartialFormatVersion.
PartialCG partial_from_json(const Json& j);

std::string serialize_partial(const PartialCG& pcg);
PartialCG deserialize_partial(std::string_view text);

struct FullCGJsonOptions {
  bool include_stats = true;
};

Json fullcg_to_json(const FullCG& cg, const FullCGJsonOptions& options = {});
// Parses the stitched-graph schema back. Throws Error(CorruptEntry).
FullCG fullcg_from_json(const Json& j);

// Pretty-printed canonical text with a trailing newline.
std::string serialize_fullcg(const FullCG& cg, const FullCGJsonOptions& options = {});

// The one place JSON text is produced, so every writer agrees on format.
std::string dump_canonical(const Json& j, int indent = -1);

}  // namespace cgstitch

#endif  // CGSTITCH_CODEC_HPP
