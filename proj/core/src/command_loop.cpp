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

#include "ivsr/command_loop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "ivsr/error.hpp"
#include "ivsr/json_io.hpp"

namespace ivsr {
namespace {

constexpr std::array<std::string_view, 7> kStateNames = {
    "Proposed", "PendingApproval", "Approved", "Rejected", "Dispatched", "Executed", "Failed"};
constexpr std::array<std::string_view, 7> kActionNames = {
    "request_review", "approve", "reject", "modify", "dispatch", "succeed", "fail"};
constexpr std::array<std::string_view, 3> kVerdictNames = {"approve", "reject", "modify"};

TicketAction action_of(Verdict v) {
  switch (v) {
    case Verdict::kApprove: return TicketAction::kApprove;
    case Verdict::kReject: return TicketAction::kReject;
    case Verdict::kModify: return TicketAction::kModify;
  }
  return TicketAction::kApprove;
}

Error illegal(const CommandTicket& t, TicketAction a) {
  return Error(ErrorCode::kIllegalTransition,
               "ticket " + std::to_string(t.id) + ": cannot " + std::string(to_string(a)) +
                   " in state " + std::string(to_string(t.state)));
}

}  // namespace

std::string_view to_string(TicketState s) { return kStateNames[static_cast<std::size_t>(s)]; }

TicketState ticket_state_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == name) return static_cast<TicketState>(i);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown ticket state '" + std::string(name) + "'");
}

std::string_view to_string(TicketAction a) { return kActionNames[static_cast<std::size_t>(a)]; }

std::optional<TicketState> transition(TicketState from, TicketAction action) {
  using S = TicketState;
  using A = TicketAction;
  switch (from) {
    case S::kProposed:
      if (action == A::kRequestReview) return S::kPendingApproval;
      break;
    case S::kPendingApproval:
      if (action == A::kApprove || action == A::kModify) return S::kApproved;
      if (action == A::kReject) return S::kRejected;
      break;
    case S::kApproved:
      if (action == A::kDispatch) return S::kDispatched;
      break;
    case S::kDispatched:
      if (action == A::kSucceed) return S::kExecuted;
      if (action == A::kFail) return S::kFailed;
      break;
    case S::kRejected:
    case S::kExecuted:
    case S::kFailed:
      break;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict v) { return kVerdictNames[static_cast<std::size_t>(v)]; }

Verdict verdict_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kVerdictNames.size(); ++i) {
    if (kVerdictNames[i] == name) return static_cast<Verdict>(i);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown verdict '" + std::string(name) + "'");
}

void OverrideLedger::append(LedgerEntry entry) {
  if (entry.verdict == Verdict::kReject) ++rejections_[{entry.scenario_id, entry.plan_id}];
  entries_.push_back(std::move(entry));
}

double OverrideLedger::penalty(const std::string& scenario_id, const std::string& plan_id) const {
  auto it = rejections_.find({scenario_id, plan_id});
  if (it == rejections_.end()) return 1.0;
  return std::max(std::pow(config_.gamma, it->second), config_.floor);
}

double plan_score(const InterventionPlan& plan, const RankWeights& w) {
  return w.effectiveness * plan.effectiveness + w.cost_efficiency * plan.cost_efficiency +
         w.response_speed * plan.response_speed;
}

std::vector<Recommendation> recommend(const std::vector<MatchResult>& matches,
                                      const ScenarioLibrary& library, const OverrideLedger& ledger,
                                      const RankWeights& weights) {
  if (matches.empty()) throw Error(ErrorCode::kNoMatches, "no matching scenario");
  if (!(weights.effectiveness >= 0.0 && weights.cost_efficiency >= 0.0 &&
        weights.response_speed >= 0.0)) {
    throw Error(ErrorCode::kBadWeights, "rank weights must be non-negative");
  }
  const ScenarioRecord* scenario = library.find(matches.front().scenario_id);
  if (!scenario) {
    throw Error(ErrorCode::kUnknownScenario, "scenario '" + matches.front().scenario_id + "'");
  }
  std::vector<Recommendation> out;
  for (const InterventionPlan& plan : scenario->plans) {
    Recommendation r;
    r.scenario_id = scenario->id;
    r.plan = plan;
    r.base_score = plan_score(plan, weights);
    r.penalty = ledger.penalty(scenario->id, plan.id);
    r.score = r.base_score * r.penalty;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    return a.score > b.score || (a.score == b.score && a.plan.id < b.plan.id);
  });
  return out;
}

InterventionPlan fit_to_resources(const InterventionPlan& plan, const StatusLog& status) {
  InterventionPlan out = plan;
  std::map<ResourceKind, std::int64_t> left;
  for (Action& a : out.actions) {
    auto kind = resource_for(a.kind);
    if (!kind) continue;
    auto [it, fresh] = left.try_emplace(*kind, 0);
    if (fresh) it->second = status.available(*kind);
    a.quantity = std::clamp<std::int64_t>(a.quantity, 0, it->second);
    it->second -= a.quantity;
  }
  return out;
}

CommandDesk::CommandDesk(ScenarioLookup known_scenario, DeskConfig config)
    : known_scenario_(std::move(known_scenario)), config_(config), ledger_(config.ledger) {
  if (config_.quorum < 1) throw Error(ErrorCode::kInvalidArgument, "quorum must be >= 1");
}

void CommandDesk::persist_to(const std::filesystem::path& path) {
  std::lock_guard lock(mutex_);
  std::ofstream touch(path, std::ios::app);
  if (!touch) throw Error(ErrorCode::kStorageError, "cannot open " + path.string());
  log_path_ = path;
}

void CommandDesk::on_event(std::function<void(const TicketEvent&)> listener) {
  std::lock_guard lock(mutex_);
  listeners_.push_back(std::move(listener));
}

CommandTicket& CommandDesk::ticket(TicketId id) {
  auto it = tickets_.find(id);
  if (it == tickets_.end()) throw Error(ErrorCode::kNotFound, "no ticket " + std::to_string(id));
  return it->second;
}

void CommandDesk::emit(TicketId id, std::string type, nlohmann::json body) {
  TicketEvent ev{events_.size() + 1, id, std::move(type), std::move(body)};
  if (log_path_) {
    std::ofstream out(*log_path_, std::ios::app);
    out << json(ev).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kStorageError, "append to " + log_path_->string() + " failed");
  }
  apply(ev);
  events_.push_back(ev);
  for (const auto& listener : listeners_) listener(ev);
}

void CommandDesk::apply(const TicketEvent& ev) {
  if (ev.type == "proposed") {
    CommandTicket t;
    t.id = ev.ticket;
    t.plan = ev.body.at("plan").get<InterventionPlan>();
    t.scenario_id = ev.body.at("scenario_id").get<std::string>();
    t.state = TicketState::kProposed;
    tickets_[t.id] = std::move(t);
    next_id_ = std::max(next_id_, ev.ticket + 1);
    return;
  }
  CommandTicket& t = ticket(ev.ticket);
  if (ev.type == "review") {
    t.state = TicketState::kPendingApproval;
  } else if (ev.type == "decision") {
    Decision d = ev.body.at("decision").get<Decision>();
    t.decisions.push_back(d);
    t.state = ticket_state_from_string(ev.body.at("state").get<std::string>());
    if (d.verdict != Verdict::kApprove) {
      LedgerEntry entry{t.scenario_id, t.plan.id, d.verdict, d.timestamp, nullptr};
      if (d.modified_plan) entry.delta = *d.modified_plan;
      ledger_.append(std::move(entry));
    }
    if (d.verdict == Verdict::kModify && d.modified_plan) t.plan = *d.modified_plan;
  } else if (ev.type == "dispatched") {
    t.dispatch = ev.body.get<DispatchRecord>();
    t.state = TicketState::kDispatched;
  } else if (ev.type == "outcome") {
    t.outcome = ev.body.get<Outcome>();
    t.state = t.outcome->success ? TicketState::kExecuted : TicketState::kFailed;
  } else {
    throw Error(ErrorCode::kSchemaError, "unknown ticket event '" + ev.type + "'");
  }
}

CommandTicket CommandDesk::propose(const InterventionPlan& plan, const std::string& scenario_id,
                                   Timestamp now) {
  plan.validate();
  std::lock_guard lock(mutex_);
  if (known_scenario_ && !known_scenario_(scenario_id)) {
    throw Error(ErrorCode::kUnknownScenario, "scenario '" + scenario_id + "'");
  }
  const TicketId id = next_id_;
  emit(id, "proposed", {{"plan", plan}, {"scenario_id", scenario_id}, {"timestamp", now}});
  return tickets_.at(id);
}

CommandTicket CommandDesk::request_review(TicketId id) {
  std::lock_guard lock(mutex_);
  CommandTicket& t = ticket(id);
  if (!transition(t.state, TicketAction::kRequestReview)) {
    throw illegal(t, TicketAction::kRequestReview);
  }
  emit(id, "review", json::object());
  return t;
}

CommandTicket CommandDesk::submit(const InterventionPlan& plan, const std::string& scenario_id,
                                  Timestamp now) {
  const CommandTicket t = propose(plan, scenario_id, now);
  return request_review(t.id);
}

CommandTicket CommandDesk::decide(TicketId id, const Decision& decision) {
  std::lock_guard lock(mutex_);
  CommandTicket& t = ticket(id);
  const TicketAction action = action_of(decision.verdict);
  auto next = transition(t.state, action);
  if (!next) throw illegal(t, action);
  if (decision.verdict == Verdict::kModify) {
    if (!decision.modified_plan) {
      throw Error(ErrorCode::kMissingModifiedPlan, "modify verdict without a plan");
    }
    decision.modified_plan->validate();
  }
  if (decision.verdict == Verdict::kApprove) {
    std::set<std::string> approvers{decision.approver_id};
    for (const Decision& d : t.decisions) {
      if (d.verdict == Verdict::kApprove) approvers.insert(d.approver_id);
    }
    if (static_cast<int>(approvers.size()) < config_.quorum) next = TicketState::kPendingApproval;
  }
  emit(id, "decision", {{"decision", decision}, {"state", to_string(*next)}});
  return t;
}

CommandTicket CommandDesk::dispatch(TicketId id, const DispatchContext& context, Timestamp now) {
  std::lock_guard lock(mutex_);
  CommandTicket& t = ticket(id);
  if (!transition(t.state, TicketAction::kDispatch)) throw illegal(t, TicketAction::kDispatch);

  DispatchRecord record;
  record.timestamp = now;
  record.actions = context.status ? fit_to_resources(t.plan, *context.status).actions : t.plan.actions;
  for (const Action& a : record.actions) {
    if (a.kind != ActionKind::kDeployDrone) continue;
    if (!context.scene) {
      throw Error(ErrorCode::kInvalidArgument, "drone dispatch needs a scene");
    }
    const auto* target = std::get_if<Vec3>(&a.target);
    if (!target) {
      throw Error(ErrorCode::kInvalidArgument, "drone action needs a point target");
    }
    Vec3 start;
    if (context.drone_start) {
      start = *context.drone_start;
    } else {
      const Resource* drone = nullptr;
      if (context.status) {
        for (const Resource& r : context.status->resources) {
          if (r.kind == ResourceKind::kDrone) {
            drone = &r;
            break;
          }
        }
      }
      const Aabb& b = context.scene->bounds();
      start = drone ? drone->position : (b.min + b.max) * 0.5;
    }
    record.routes.push_back(plan_standoff_route(*context.scene, context.spread, start, *target,
                                                context.clearance, context.voxel));
  }
  emit(id, "dispatched", record);
  return t;
}

CommandTicket CommandDesk::report_outcome(TicketId id, bool success, const std::string& note,
                                          Timestamp now) {
  std::lock_guard lock(mutex_);
  CommandTicket& t = ticket(id);
  const TicketAction action = success ? TicketAction::kSucceed : TicketAction::kFail;
  if (!transition(t.state, action)) throw illegal(t, action);
  emit(id, "outcome", Outcome{success, note, now});
  return t;
}

std::optional<CommandTicket> CommandDesk::get(TicketId id) const {
  std::lock_guard lock(mutex_);
  auto it = tickets_.find(id);
  if (it == tickets_.end()) return std::nullopt;
  return it->second;
}

std::vector<CommandTicket> CommandDesk::tickets() const {
  std::lock_guard lock(mutex_);
  std::vector<CommandTicket> out;
  for (const auto& entry : tickets_) out.push_back(entry.second);
  return out;
}

OverrideLedger CommandDesk::ledger() const {
  std::lock_guard lock(mutex_);
  return ledger_;
}

std::vector<TicketEvent> CommandDesk::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

void CommandDesk::restore(const std::vector<TicketEvent>& events) {
  std::lock_guard lock(mutex_);
  if (!events_.empty()) throw Error(ErrorCode::kInvalidArgument, "restore needs an empty desk");
  for (const TicketEvent& ev : events) {
    apply(ev);
    events_.push_back(ev);
  }
}

std::vector<TicketEvent> CommandDesk::load_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kStorageError, "cannot read " + path.string());
  std::vector<TicketEvent> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line).get<TicketEvent>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kStorageError, path.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace ivsr
