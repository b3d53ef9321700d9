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

// Recommendation ranking, the expert-approval ticket workflow and dispatch.
//
// Ticket lifecycle:
//
//   Proposed -> PendingApproval -> Approved -> Dispatched -> Executed
//                               \-> Rejected             \-> Failed
//
// A modify verdict swaps in the expert's plan and approves it. Every
// transition is recorded as one event; replaying the events rebuilds the
// desk exactly.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivsr/route_planner.hpp"
#include "ivsr/scenario_library.hpp"
#include "ivsr/status_log.hpp"
#include "ivsr/timestamp.hpp"

namespace ivsr {

enum class TicketState : std::uint8_t {
  kProposed,
  kPendingApproval,
  kApproved,
  kRejected,
  kDispatched,
  kExecuted,
  kFailed,
};

enum class TicketAction : std::uint8_t {
  kRequestReview,
  kApprove,
  kReject,
  kModify,
  kDispatch,
  kSucceed,
  kFail,
};

inline constexpr std::array<TicketState, 7> kAllTicketStates = {
    TicketState::kProposed, TicketState::kPendingApproval, TicketState::kApproved,
    TicketState::kRejected, TicketState::kDispatched,      TicketState::kExecuted,
    TicketState::kFailed};
inline constexpr std::array<TicketAction, 7> kAllTicketActions = {
    TicketAction::kRequestReview, TicketAction::kApprove,  TicketAction::kReject,
    TicketAction::kModify,        TicketAction::kDispatch, TicketAction::kSucceed,
    TicketAction::kFail};

std::string_view to_string(TicketState s);
TicketState ticket_state_from_string(std::string_view name);
std::string_view to_string(TicketAction a);

// Target state of a legal transition, absent otherwise. An approve that has
// not yet reached quorum leaves the ticket in PendingApproval.
std::optional<TicketState> transition(TicketState from, TicketAction action);

enum class Verdict : std::uint8_t { kApprove, kReject, kModify };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view name);  // throws kInvalidArgument

struct Decision {
  std::string approver_id;
  Verdict verdict = Verdict::kApprove;
  std::optional<InterventionPlan> modified_plan;
  Timestamp timestamp;
};

struct Outcome {
  bool success = false;
  std::string note;
  Timestamp timestamp;
};

struct DispatchRecord {
  Timestamp timestamp;
  std::vector<Action> actions;     // quantities clamped to available resources
  std::vector<RoutePlan> routes;   // one per deploy_drone action, in order
};

using TicketId = std::uint64_t;

struct CommandTicket {
  TicketId id = 0;
  InterventionPlan plan;
  std::string scenario_id;
  TicketState state = TicketState::kProposed;
  std::vector<Decision> decisions;
  std::optional<DispatchRecord> dispatch;
  std::optional<Outcome> outcome;
};

struct LedgerEntry {
  std::string scenario_id;
  std::string plan_id;
  Verdict verdict = Verdict::kReject;
  Timestamp timestamp;
  nlohmann::json delta;  // modified plan for modify verdicts
};

struct LedgerConfig {
  double gamma = 0.8;
  double floor = 0.2;
};

// Expert overrides. Each rejection of a (scenario, plan) pair multiplies its
// future score by gamma, down to `floor`.
class OverrideLedger {
 public:
  explicit OverrideLedger(LedgerConfig config = {}) : config_(config) {}

  void append(LedgerEntry entry);
  double penalty(const std::string& scenario_id, const std::string& plan_id) const;
  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const LedgerConfig& config() const { return config_; }

 private:
  LedgerConfig config_;
  std::vector<LedgerEntry> entries_;
  std::map<std::pair<std::string, std::string>, int> rejections_;
};

struct RankWeights {
  double effectiveness = 0.5;
  double cost_efficiency = 0.25;
  double response_speed = 0.25;
};

struct Recommendation {
  std::string scenario_id;
  InterventionPlan plan;
  double base_score = 0.0;
  double penalty = 1.0;
  double score = 0.0;  // base_score · penalty
};

double plan_score(const InterventionPlan& plan, const RankWeights& weights);

// Plans of the top match's scenario, best first, ties by plan id. Throws
// kNoMatches for an empty match list, kUnknownScenario when the top match is
// missing from the library.
std::vector<Recommendation> recommend(const std::vector<MatchResult>& matches,
                                      const ScenarioLibrary& library, const OverrideLedger& ledger,
                                      const RankWeights& weights = {});

// Clamps resource-backed action quantities to the units still available in
// the register, allocating in action order.
InterventionPlan fit_to_resources(const InterventionPlan& plan, const StatusLog& status);

struct DispatchContext {
  const Scene* scene = nullptr;
  const SpreadState* spread = nullptr;  // may be null
  const StatusLog* status = nullptr;    // may be null; no clamping without it
  std::optional<Vec3> drone_start;      // defaults to the first drone resource, then the scene center
  double clearance = kDefaultClearance;
  double voxel = kDefaultVoxelSize;
};

struct TicketEvent {
  std::uint64_t seq = 0;
  TicketId ticket = 0;
  std::string type;  // proposed, review, decision, dispatched, outcome
  nlohmann::json body;
};

struct DeskConfig {
  int quorum = 1;
  LedgerConfig ledger;
};

// Serialized owner of all tickets and the override ledger. Every method
// returns a snapshot copy.
class CommandDesk {
 public:
  using ScenarioLookup = std::function<bool(const std::string&)>;

  explicit CommandDesk(ScenarioLookup known_scenario = {}, DeskConfig config = {});

  // Appends each event as one JSON line to `path` (created when missing).
  void persist_to(const std::filesystem::path& path);
  void on_event(std::function<void(const TicketEvent&)> listener);

  CommandTicket propose(const InterventionPlan& plan, const std::string& scenario_id, Timestamp now);
  CommandTicket request_review(TicketId id);
  // propose + request_review. Throws kUnknownScenario.
  CommandTicket submit(const InterventionPlan& plan, const std::string& scenario_id, Timestamp now);
  // Throws kNotFound, kIllegalTransition, kMissingModifiedPlan.
  CommandTicket decide(TicketId id, const Decision& decision);
  // Throws kNotFound, kIllegalTransition; propagates kRouteBlocked.
  CommandTicket dispatch(TicketId id, const DispatchContext& context, Timestamp now);
  CommandTicket report_outcome(TicketId id, bool success, const std::string& note, Timestamp now);

  std::optional<CommandTicket> get(TicketId id) const;
  std::vector<CommandTicket> tickets() const;
  OverrideLedger ledger() const;
  std::vector<TicketEvent> events() const;

  // Rebuilds tickets and ledger from an event stream. The desk must be empty.
  void restore(const std::vector<TicketEvent>& events);
  static std::vector<TicketEvent> load_events(const std::filesystem::path& path);

 private:
  CommandTicket& ticket(TicketId id);
  void emit(TicketId id, std::string type, nlohmann::json body);
  void apply(const TicketEvent& event);

  mutable std::mutex mutex_;
  ScenarioLookup known_scenario_;
  DeskConfig config_;
  OverrideLedger ledger_;
  std::map<TicketId, CommandTicket> tickets_;
  TicketId next_id_ = 1;
  std::vector<TicketEvent> events_;
  std::optional<std::filesystem::path> log_path_;
  std::vector<std::function<void(const TicketEvent&)>> listeners_;
};

}  // namespace ivsr
