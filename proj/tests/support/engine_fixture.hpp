// Copyright 2026 The IVSR Authors.
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

// Engine inputs built from the sample files under data/.

#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ivsr/command_loop.hpp"
#include "ivsr/gateway.hpp"
#include "ivsr/json_io.hpp"
#include "test_support.hpp"

namespace ivsr::testing {

inline std::vector<MaterialProfile> sample_materials() {
  return from_document<std::vector<MaterialProfile>>(
      read_json_file(kDataDir / "materials.json").at("materials"), "materials");
}

inline ScenarioLibrary sample_library() {
  const json grid_doc = read_json_file(kDataDir / "grid.json");
  const auto grid = from_document<ScenarioGrid>(grid_doc, "grid");
  const auto templates =
      from_document<std::vector<InterventionPlan>>(grid_doc.at("plan_templates"), "grid");
  return ScenarioLibrary(precompute_library(
      scene_from_json(read_json_file(kDataDir / "scene_room.json")), sample_materials(), grid,
      templates));
}

inline EngineInputs sample_inputs(ScenarioLibrary library) {
  EngineInputs in{scene_from_json(read_json_file(kDataDir / "scene_room.json")),
                  std::move(library),
                  sample_materials(),
                  sensors_from_json(read_json_file(kDataDir / "sensors.json")),
                  from_document<std::vector<Resource>>(
                      read_json_file(kDataDir / "resources.json").at("resources"), "resources"),
                  {},
                  {PathObject::kTrees, PathObject::kPowerLines}};
  return in;
}

struct ExpectedTop {
  std::string scenario_id;
  std::string plan_id;
};

// Linear scan over the whole library followed by plan ranking, without the
// engine's pruning or ledger.
inline ExpectedTop scan_top(const ScenarioLibrary& lib, const FeatureVector& f,
                            const std::vector<double>& growth, const MatchConfig& cfg = {},
                            const RankWeights& w = {}) {
  double best = std::numeric_limits<double>::infinity();
  const ScenarioRecord* winner = nullptr;
  const auto q = growth_rates(growth);
  for (const ScenarioRecord& r : lib.records()) {
    const double c = cfg.alpha * static_distance(f, r.features, cfg.weights, cfg.ranges) +
                     cfg.beta * dtw(q, growth_rates(r.growth));
    if (c < best || (c == best && winner && r.id < winner->id)) {
      best = c;
      winner = &r;
    }
  }
  const InterventionPlan* top = nullptr;
  double top_score = -1;
  for (const InterventionPlan& p : winner->plans) {
    const double s = w.effectiveness * p.effectiveness + w.cost_efficiency * p.cost_efficiency +
                     w.response_speed * p.response_speed;
    if (s > top_score || (s == top_score && p.id < top->id)) {
      top_score = s;
      top = &p;
    }
  }
  return {winner->id, top->id};
}

}  // namespace ivsr::testing
