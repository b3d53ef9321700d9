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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>

#include <unistd.h>

#include "ivsr/command_loop.hpp"
#include "ivsr/error.hpp"
#include "ivsr/json_io.hpp"

namespace ivsr {
namespace {

using S = TicketState;
using A = TicketAction;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

InterventionPlan crew_plan(std::string id = "crew", double e = 0.8, double c = 0.4, double r = 0.6) {
  return {std::move(id), {{ActionKind::kDeployCrew, std::string("zone-a"), 4}}, e, c, r};
}

InterventionPlan drone_plan(Vec3 target) {
  return {"drone", {{ActionKind::kDeployDrone, target, 1}}, 0.9, 0.5, 0.9};
}

Decision verdict(Verdict v, std::string who = "expert-1") {
  Decision d;
  d.approver_id = std::move(who);
  d.verdict = v;
  return d;
}

TEST(Transitions, ExhaustiveTable) {
  const std::set<std::tuple<S, A, S>> legal = {
      {S::kProposed, A::kRequestReview, S::kPendingApproval},
      {S::kPendingApproval, A::kApprove, S::kApproved},
      {S::kPendingApproval, A::kModify, S::kApproved},
      {S::kPendingApproval, A::kReject, S::kRejected},
      {S::kApproved, A::kDispatch, S::kDispatched},
      {S::kDispatched, A::kSucceed, S::kExecuted},
      {S::kDispatched, A::kFail, S::kFailed},
  };
  int n = 0;
  for (S s : kAllTicketStates) {
    for (A a : kAllTicketActions) {
      auto next = transition(s, a);
      bool found = false;
      for (const auto& [from, act, to] : legal) {
        if (from == s && act == a) {
          found = true;
          ASSERT_TRUE(next);
          EXPECT_EQ(*next, to);
        }
      }
      if (!found) EXPECT_FALSE(next) << to_string(s) << " " << to_string(a);
      ++n;
    }
  }
  EXPECT_EQ(n, 49);
}

TEST(Recommend, ScoresAndOrder) {
  EXPECT_NEAR(plan_score(crew_plan(), {}), 0.65, 1e-12);
  ScenarioLibrary lib({{"scn", {}, {0}, {crew_plan("low", 0, 0, 0), crew_plan("high", 1, 1, 1)}}});
  const auto recs = recommend({{"scn", 0, 0, 0}}, lib, OverrideLedger{});
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].plan.id, "high");
  EXPECT_EQ(code_of([&] { recommend({}, lib, OverrideLedger{}); }), ErrorCode::kNoMatches);
  EXPECT_EQ(code_of([&] { recommend({{"missing", 0, 0, 0}}, lib, OverrideLedger{}); }),
            ErrorCode::kUnknownScenario);
}

TEST(Recommend, RejectionPenalty) {
  ScenarioLibrary lib({{"scn", {}, {0}, {crew_plan("a")}}});
  OverrideLedger ledger;
  ledger.append({"scn", "a", Verdict::kReject, {}, nullptr});
  const auto recs = recommend({{"scn", 0, 0, 0}}, lib, ledger);
  EXPECT_NEAR(recs[0].score, 0.65 * 0.8, 1e-12);
  for (int i = 0; i < 20; ++i) ledger.append({"scn", "a", Verdict::kReject, {}, nullptr});
  EXPECT_DOUBLE_EQ(ledger.penalty("scn", "a"), 0.2);
  EXPECT_DOUBLE_EQ(ledger.penalty("scn", "b"), 1.0);
}

TEST(Desk, SubmitCreatesDistinctTickets) {
  CommandDesk desk([](const std::string& id) { return id == "scn"; });
  const auto a = desk.submit(crew_plan(), "scn", {});
  const auto b = desk.submit(crew_plan(), "scn", {});
  EXPECT_NE(a.id, b.id);
  EXPECT_EQ(a.state, S::kPendingApproval);
  EXPECT_EQ(code_of([&] { desk.submit(crew_plan(), "other", {}); }), ErrorCode::kUnknownScenario);
}

TEST(Desk, ApproveRejectModify) {
  CommandDesk desk;
  const auto t1 = desk.submit(crew_plan("a"), "scn", {});
  EXPECT_EQ(desk.decide(t1.id, verdict(Verdict::kApprove)).state, S::kApproved);
  const auto t2 = desk.submit(crew_plan("b"), "scn", {});
  EXPECT_EQ(desk.decide(t2.id, verdict(Verdict::kReject)).state, S::kRejected);
  EXPECT_DOUBLE_EQ(desk.ledger().penalty("scn", "b"), 0.8);
  const auto t3 = desk.submit(crew_plan("c"), "scn", {});
  EXPECT_EQ(code_of([&] { desk.decide(t3.id, verdict(Verdict::kModify)); }),
            ErrorCode::kMissingModifiedPlan);
  Decision mod = verdict(Verdict::kModify);
  mod.modified_plan = crew_plan("c2", 0.1, 0.2, 0.3);
  const auto after = desk.decide(t3.id, mod);
  EXPECT_EQ(after.state, S::kApproved);
  EXPECT_EQ(after.plan.id, "c2");
  EXPECT_EQ(desk.ledger().entries().back().delta.at("id"), "c2");
  EXPECT_EQ(code_of([&] { desk.decide(t1.id, verdict(Verdict::kApprove)); }),
            ErrorCode::kIllegalTransition);
  EXPECT_EQ(code_of([&] { desk.decide(999, verdict(Verdict::kApprove)); }), ErrorCode::kNotFound);
}

TEST(Desk, QuorumCountsDistinctApprovers) {
  CommandDesk desk({}, DeskConfig{2, {}});
  const auto t = desk.submit(crew_plan(), "scn", {});
  EXPECT_EQ(desk.decide(t.id, verdict(Verdict::kApprove, "x")).state, S::kPendingApproval);
  EXPECT_EQ(desk.decide(t.id, verdict(Verdict::kApprove, "x")).state, S::kPendingApproval);
  EXPECT_EQ(desk.decide(t.id, verdict(Verdict::kApprove, "y")).state, S::kApproved);
}

TEST(Desk, DispatchAndOutcome) {
  const Scene room = make_room(10, 8, 3);
  DispatchContext ctx;
  ctx.scene = &room;
  CommandDesk desk;
  const auto crew = desk.submit(crew_plan(), "scn", {});
  desk.decide(crew.id, verdict(Verdict::kApprove));
  const auto d = desk.dispatch(crew.id, ctx, {});
  EXPECT_EQ(d.state, S::kDispatched);
  EXPECT_TRUE(d.dispatch->routes.empty());
  EXPECT_EQ(desk.report_outcome(crew.id, true, "ok", {}).state, S::kExecuted);

  const auto drone = desk.submit(drone_plan({8, 6, 1.5}), "scn", {});
  desk.decide(drone.id, verdict(Verdict::kApprove));
  ctx.drone_start = Vec3{1.2, 1.2, 1.2};
  const auto dd = desk.dispatch(drone.id, ctx, {});
  ASSERT_EQ(dd.dispatch->routes.size(), 1u);
  EXPECT_GT(dd.dispatch->routes[0].total_length, 0.0);
  EXPECT_EQ(desk.report_outcome(drone.id, false, "lost link", {}).state, S::kFailed);

  const auto rejected = desk.submit(crew_plan(), "scn", {});
  desk.decide(rejected.id, verdict(Verdict::kReject));
  EXPECT_EQ(code_of([&] { desk.dispatch(rejected.id, ctx, {}); }), ErrorCode::kIllegalTransition);
  const auto pending = desk.submit(crew_plan(), "scn", {});
  EXPECT_EQ(code_of([&] { desk.report_outcome(pending.id, true, "", {}); }),
            ErrorCode::kIllegalTransition);
}

TEST(Desk, FitToResources) {
  StatusLog s;
  s.resources = {{ResourceKind::kFirefighter, 20, {}, 3}};
  InterventionPlan p{"p",
                     {{ActionKind::kDeployCrew, std::string("a"), 2},
                      {ActionKind::kDeployCrew, std::string("b"), 2},
                      {ActionKind::kEvacuateZone, std::string("c"), 5}},
                     0.5, 0.5, 0.5};
  const auto fit = fit_to_resources(p, s);
  EXPECT_EQ(fit.actions[0].quantity, 2);
  EXPECT_EQ(fit.actions[1].quantity, 1);
  EXPECT_EQ(fit.actions[2].quantity, 5);
}

TEST(Desk, RandomSequencesNeverDispatchUnapproved) {
  std::mt19937_64 rng(77);
  const Scene room = make_room(10, 8, 3);
  DispatchContext ctx;
  ctx.scene = &room;
  for (int run = 0; run < 200; ++run) {
    CommandDesk desk({}, DeskConfig{1 + run % 2, {}});
    std::vector<TicketId> ids;
    std::uniform_int_distribution<int> op(0, 7);
    for (int step = 0; step < 30; ++step) {
      const int o = op(rng);
      if (o == 0 || ids.empty()) {
        ids.push_back(desk.propose(crew_plan(), "scn", {}).id);
        continue;
      }
      const TicketId id = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
      try {
        switch (o) {
          case 1: desk.request_review(id); break;
          case 2: desk.decide(id, verdict(Verdict::kApprove, step % 2 ? "a" : "b")); break;
          case 3: desk.decide(id, verdict(Verdict::kReject)); break;
          case 4: {
            Decision m = verdict(Verdict::kModify);
            m.modified_plan = crew_plan("m");
            desk.decide(id, m);
            break;
          }
          case 5: desk.dispatch(id, ctx, {}); break;
          case 6: desk.report_outcome(id, true, "", {}); break;
          default: desk.report_outcome(id, false, "", {}); break;
        }
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kIllegalTransition);
      }
    }
    for (const auto& t : desk.tickets()) {
      if (t.state != S::kDispatched && t.state != S::kExecuted && t.state != S::kFailed) continue;
      EXPECT_TRUE(t.dispatch.has_value());
      bool approved = false;
      for (const auto& d : t.decisions) approved |= d.verdict != Verdict::kReject;
      EXPECT_TRUE(approved);
    }
  }
}

TEST(Desk, EventLogRebuildsDesk) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("ivsr-desk-" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(path);
  const Scene room = make_room(10, 8, 3);
  DispatchContext ctx;
  ctx.scene = &room;
  ctx.drone_start = Vec3{1.2, 1.2, 1.2};
  CommandDesk desk;
  desk.persist_to(path);
  std::vector<TicketEvent> seen;
  desk.on_event([&](const TicketEvent& e) { seen.push_back(e); });
  const auto a = desk.submit(drone_plan({7, 5, 1}), "scn", {});
  desk.decide(a.id, verdict(Verdict::kApprove));
  desk.dispatch(a.id, ctx, {});
  desk.report_outcome(a.id, true, "done", {});
  const auto b = desk.submit(crew_plan(), "scn", {});
  desk.decide(b.id, verdict(Verdict::kReject));
  EXPECT_EQ(seen.size(), desk.events().size());

  CommandDesk rebuilt;
  rebuilt.restore(CommandDesk::load_events(path));
  ASSERT_EQ(rebuilt.tickets().size(), 2u);
  EXPECT_EQ(json(rebuilt.tickets()).dump(), json(desk.tickets()).dump());
  EXPECT_DOUBLE_EQ(rebuilt.ledger().penalty("scn", "crew"), 0.8);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace ivsr
