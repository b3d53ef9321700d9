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

// ivsr: command-line front end for coverage analysis, spread runs, scenario
// library builds and the gateway server.

#include <chrono>
#include <csignal>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ivsr/coverage.hpp"
#include "ivsr/gateway.hpp"
#include "ivsr/gateway_server.hpp"
#include "ivsr/json_io.hpp"
#include "ivsr/scenario_library.hpp"
#include "ivsr/spread.hpp"

namespace {

using ivsr::json;

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

std::vector<ivsr::MaterialProfile> load_materials(const std::string& path) {
  if (path.empty()) return ivsr::default_materials();
  const json doc = ivsr::read_json_file(path);
  const json& list = doc.is_object() ? doc.at("materials") : doc;
  return ivsr::from_document<std::vector<ivsr::MaterialProfile>>(list, path);
}

std::vector<ivsr::CameraPose> load_cameras(const std::string& path) {
  const json doc = ivsr::read_json_file(path);
  const json& list = doc.is_object() ? doc.at("cameras") : doc;
  return ivsr::from_document<std::vector<ivsr::CameraPose>>(list, path);
}

ivsr::Vec3 parse_point(const std::string& text, double* time) {
  std::string spec = text;
  if (auto at = spec.find('@'); at != std::string::npos) {
    if (time) *time = std::stod(spec.substr(at + 1));
    spec = spec.substr(0, at);
  }
  std::stringstream ss(spec);
  std::string part;
  std::vector<double> v;
  while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
  if (v.size() != 3) throw ivsr::Error(ivsr::ErrorCode::kInvalidArgument, "point must be x,y,z");
  return {v[0], v[1], v[2]};
}

void print(const json& doc, bool pretty) { std::cout << (pretty ? doc.dump(2) : doc.dump()) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wildfire digital-twin engine"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Indent JSON output");

  // coverage
  auto* cov = app.add_subcommand("coverage", "Ray-grid coverage of cameras over a scene");
  std::string cov_scene, cov_cameras;
  double patch_size = ivsr::kDefaultPatchSize;
  int rays_n = ivsr::kDefaultRaysN;
  std::optional<std::size_t> k;
  double min_gain = 0.0;
  cov->add_option("--scene", cov_scene, "Scene file")->required();
  cov->add_option("--cameras", cov_cameras, "Camera list file")->required();
  cov->add_option("--patch-size", patch_size, "Patch edge length in metres");
  cov->add_option("--rays-n", rays_n, "Rays per view-plane side");
  cov->add_option("--k", k, "Pick k cameras greedily instead of reporting each");
  cov->add_option("--min-gain", min_gain, "Stop greedy placement below this gain (m²)");

  // spread
  auto* spr = app.add_subcommand("spread", "Run the fire spread model to a horizon");
  std::string spr_scene, spr_materials;
  std::vector<std::string> ignitions;
  ivsr::Environment env;
  double horizon = 60.0, dt = 0.5, spr_patch = ivsr::kDefaultPatchSize;
  spr->add_option("--scene", spr_scene, "Scene file")->required();
  spr->add_option("--materials", spr_materials, "Material table file");
  spr->add_option("--ignition", ignitions, "Ignition point x,y,z[@t]")->required();
  spr->add_option("--horizon", horizon, "Simulated seconds");
  spr->add_option("--dt", dt, "Tick length in seconds");
  spr->add_option("--patch-size", spr_patch, "Patch edge length in metres");
  spr->add_option("--air-temp", env.air_temp, "Air temperature (°C)");
  spr->add_option("--humidity", env.humidity, "Relative humidity (%)");
  spr->add_option("--wind-speed", env.wind_speed, "Wind speed (km/h)");
  spr->add_option("--wind-direction", env.wind_direction, "Bearing the wind blows toward (°)");

  // library
  auto* lib = app.add_subcommand("library", "Scenario library tools");
  lib->require_subcommand(1);
  auto* build = lib->add_subcommand("build", "Precompute a library from a grid file");
  std::string lib_scene, lib_materials, lib_grid, lib_out;
  build->add_option("--scene", lib_scene, "Scene file")->required();
  build->add_option("--materials", lib_materials, "Material table file");
  build->add_option("--grid", lib_grid, "Grid file")->required();
  build->add_option("--out", lib_out, "Output directory")->required();
  auto* list = lib->add_subcommand("list", "Summarize a library directory");
  std::string list_dir;
  list->add_option("--library", list_dir, "Library directory")->required();

  // serve
  auto* srv = app.add_subcommand("serve", "Run the gateway");
  std::string srv_scene, srv_library, srv_materials, srv_sensors, srv_resources, srv_env;
  std::string address = "127.0.0.1", incident_log, ticket_log;
  int port = 8080;
  double sim_speed = 1.0;
  srv->add_option("--scene", srv_scene, "Scene file")->required();
  srv->add_option("--library", srv_library, "Scenario library directory")->required();
  srv->add_option("--materials", srv_materials, "Material table file")->required();
  srv->add_option("--sensors", srv_sensors, "Sensor bindings file")->required();
  srv->add_option("--port", port, "Listen port")->check(CLI::Range(0, 65535));
  srv->add_option("--sim-speed", sim_speed, "Simulated seconds per wall second multiplier")
      ->check(CLI::PositiveNumber);
  srv->add_option("--address", address, "Listen address");
  srv->add_option("--resources", srv_resources, "Resource register file");
  srv->add_option("--environment", srv_env, "Initial environment file");
  srv->add_option("--incident-log", incident_log, "Detection log file (appended)");
  srv->add_option("--ticket-log", ticket_log, "Ticket event log file (appended)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cov) {
      const ivsr::TessellatedScene scene(ivsr::scene_from_json(ivsr::read_json_file(cov_scene)),
                                         patch_size);
      const auto cameras = load_cameras(cov_cameras);
      if (k) {
        print(ivsr::greedy_placement(scene, cameras, *k, min_gain, rays_n), pretty);
      } else {
        json per = json::array();
        for (const auto& c : cameras) {
          json r = ivsr::compute_coverage(scene, c, rays_n);
          r.erase("hit_points");
          r["camera_id"] = c.id;
          per.push_back(std::move(r));
        }
        json u = ivsr::union_coverage(scene, cameras, rays_n);
        u.erase("hit_points");
        print({{"cameras", per}, {"union", u}}, pretty);
      }
    } else if (*spr) {
      auto scene = std::make_shared<const ivsr::TessellatedScene>(
          ivsr::scene_from_json(ivsr::read_json_file(spr_scene)), spr_patch);
      std::vector<ivsr::Ignition> igs;
      for (const auto& text : ignitions) {
        double t = 0.0;
        const ivsr::Vec3 p = parse_point(text, &t);
        igs.push_back({p, t});
      }
      ivsr::SpreadConfig config;
      config.dt = dt;
      ivsr::SpreadState state(scene, load_materials(spr_materials), igs, env, config);
      state.advance_to(horizon, dt);
      print(ivsr::spread_summary(state), pretty);
    } else if (*build) {
      const ivsr::Scene scene = ivsr::scene_from_json(ivsr::read_json_file(lib_scene));
      const json grid_doc = ivsr::read_json_file(lib_grid);
      const auto grid = ivsr::from_document<ivsr::ScenarioGrid>(grid_doc, lib_grid);
      const auto templates = ivsr::from_document<std::vector<ivsr::InterventionPlan>>(
          grid_doc.at("plan_templates"), lib_grid);
      ivsr::ScenarioLibrary library(
          ivsr::precompute_library(scene, load_materials(lib_materials), grid, templates));
      library.save(lib_out);
      print({{"scenarios", library.size()}, {"out", lib_out}}, pretty);
    } else if (*list) {
      const auto library = ivsr::ScenarioLibrary::load(list_dir);
      json out = json::array();
      for (const auto& r : library.records()) {
        out.push_back({{"id", r.id},
                       {"features", r.features},
                       {"ticks", r.growth.size()},
                       {"final_area", r.growth.back()},
                       {"plans", r.plans.size()}});
      }
      print(out, pretty);
    } else if (*srv) {
      ivsr::EngineConfig config;
      config.sim_speed = sim_speed;
      if (!incident_log.empty()) config.incident_log = incident_log;
      if (!ticket_log.empty()) config.ticket_log = ticket_log;
      ivsr::Engine engine(config);
      ivsr::EngineInputs in{ivsr::scene_from_json(ivsr::read_json_file(srv_scene)),
                            ivsr::ScenarioLibrary::load(srv_library),
                            load_materials(srv_materials),
                            ivsr::sensors_from_json(ivsr::read_json_file(srv_sensors)),
                            {},
                            {},
                            {}};
      if (!srv_resources.empty()) {
        const json doc = ivsr::read_json_file(srv_resources);
        in.resources = ivsr::from_document<std::vector<ivsr::Resource>>(
            doc.is_object() ? doc.at("resources") : doc, srv_resources);
        if (doc.is_object() && doc.contains("objects_in_path")) {
          for (const auto& o : doc.at("objects_in_path"))
            in.objects_in_path.insert(ivsr::path_object_from_string(o.get<std::string>()));
        }
      }
      if (!srv_env.empty()) {
        in.env = ivsr::from_document<ivsr::Environment>(ivsr::read_json_file(srv_env), srv_env);
      }
      engine.load(std::move(in));
      ivsr::GatewayServer server(engine, address, static_cast<std::uint16_t>(port));
      server.start();
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      engine.start_ticking();
      std::cerr << "ivsr gateway listening on " << address << ":" << server.port() << '\n';
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      engine.stop_ticking();
      server.stop();
    }
  } catch (const ivsr::Error& e) {
    std::cerr << "error: " << ivsr::to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
