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

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "ivsr/coverage.hpp"
#include "ivsr/route_planner.hpp"
#include "ivsr/scenario_library.hpp"
#include "ivsr/spread.hpp"

namespace ivsr {
namespace {

CameraPose ceiling_camera() {
  CameraPose c;
  c.position = {5, 4, 2.9};
  c.pitch = -60;
  c.yaw = 30;
  return c;
}

void BM_RayGrid(benchmark::State& state) {
  const CameraPose cam = ceiling_camera();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ray_grid(cam, n));
}
BENCHMARK(BM_RayGrid)->Arg(10)->Arg(100);

void BM_Coverage(benchmark::State& state) {
  const TessellatedScene ts(make_room(10, 8, 3), 0.25);
  const CameraPose cam = ceiling_camera();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_coverage(ts, cam, n));
}
BENCHMARK(BM_Coverage)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SpreadStep(benchmark::State& state) {
  auto scene = std::make_shared<const TessellatedScene>(
      make_room(20, 20, 3, "concrete", "dry-vegetation"), 0.25);
  Environment env;
  env.wind_speed = 18;
  for (auto _ : state) {
    state.PauseTiming();
    SpreadState s(scene, default_materials(), {{{10, 10, 0}, 0.0}}, env);
    state.ResumeTiming();
    s.advance_to(20.0, 0.5);
    benchmark::DoNotOptimize(s.hash());
  }
}
BENCHMARK(BM_SpreadStep)->Unit(benchmark::kMillisecond);

std::vector<double> series(std::mt19937_64& rng, std::size_t len) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(len);
  double acc = 0;
  for (double& x : v) x = acc += u(rng);
  return v;
}

void BM_Dtw(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = series(rng, static_cast<std::size_t>(state.range(0)));
  const auto b = series(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dtw(a, b));
}
BENCHMARK(BM_Dtw)->Arg(16)->Arg(64)->Arg(256);

void BM_Match(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<ScenarioRecord> recs;
  for (int i = 0; i < state.range(0); ++i) {
    FeatureVector f;
    f.responders = static_cast<int>(40 * u(rng));
    f.wind_speed = 60 * u(rng);
    f.wind_direction = 359 * u(rng);
    f.max_temp = 20 + 400 * u(rng);
    recs.push_back({"s" + std::to_string(i), f, series(rng, 60),
                    {{"p", {{ActionKind::kDeployCrew, std::string("zone"), 1}}, 0.5, 0.5, 0.5}}});
  }
  const ScenarioLibrary lib(std::move(recs));
  const FeatureVector q = lib.records()[0].features;
  const auto g = series(rng, 60);
  for (auto _ : state) benchmark::DoNotOptimize(match(lib, q, g, 3));
}
BENCHMARK(BM_Match)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Astar(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution wall(0.25);
  const int n = static_cast<int>(state.range(0));
  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(n) * n * n);
  for (auto& b : blocked) b = wall(rng);
  VoxelGrid grid({0, 0, 0}, 0.5, {n, n, n}, blocked);
  grid.set_blocked({0, 0, 0}, false);
  grid.set_blocked({n - 1, n - 1, n - 1}, false);
  for (auto _ : state) benchmark::DoNotOptimize(astar(grid, {0, 0, 0}, {n - 1, n - 1, n - 1}));
}
BENCHMARK(BM_Astar)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ivsr

BENCHMARK_MAIN();
