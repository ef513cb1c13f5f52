// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include <gtest/gtest.h>

#include "skillstack/kinematics.hpp"
#include "skillstack/log_format.hpp"
#include "skillstack/robot_core.hpp"
#include "skillstack/skill_builders.hpp"
#include "test_support.hpp"

namespace skillstack::core {
namespace {

using skill::TerminationCause;
using testing::panda;
using testing::run_until_quiescent;
using wire::StatusPhase;

class LoopHarness {
 public:
  explicit LoopHarness(LoopOptions opts = {}) : loop(panda(), mailbox, std::move(opts)) {}

  std::uint32_t submit(skill::SkillSpec spec) {
    const std::uint32_t id = next_id++;
    EXPECT_TRUE(mailbox.post(SubmitSkill{id, std::move(spec)}));
    return id;
  }
  TickInfo tick() { return loop.tick(loop.state().tick * 1000000ULL); }
  void collect() {
    for (auto& s : loop.take_status()) statuses.push_back(std::move(s));
  }
  std::vector<wire::SkillStatusMsg> for_skill(std::uint32_t id) const {
    std::vector<wire::SkillStatusMsg> out;
    for (const auto& s : statuses) {
      if (s.skill_id == id) out.push_back(s);
    }
    return out;
  }

  CommandMailbox mailbox;
  ControlLoop loop;
  std::vector<wire::SkillStatusMsg> statuses;
  std::uint32_t next_id = 1;
};

TEST(ControlLoop, TimeTerminatorRunsExactlyDurationTicks) {
  LoopHarness h;
  const std::uint32_t id = h.submit(skill::hold(1.0));
  std::uint64_t with_skill = 0;
  while (!h.loop.quiescent()) {
    const TickInfo t = h.tick();
    EXPECT_TRUE(t.commanded);
    with_skill += t.skill_id == id;
  }
  EXPECT_EQ(with_skill, 1000U);
  h.collect();
  const auto st = h.for_skill(id);
  ASSERT_EQ(st.size(), 2U);
  EXPECT_EQ(st[0].phase, StatusPhase::Running);
  EXPECT_EQ(st[1].phase, StatusPhase::Succeeded);
  EXPECT_EQ(st[1].cause, TerminationCause::Time);
  EXPECT_EQ(st[1].state.tick, 1000U);

  const log::LogFile f = log::parse_log(h.loop.log().serialize());
  ASSERT_EQ(f.records.size(), 1000U);
  for (std::size_t i = 0; i < f.records.size(); ++i) {
    ASSERT_EQ(f.records[i].tick, i);
    ASSERT_EQ(f.records[i].wall_ns, i * 1000000ULL);
    ASSERT_EQ(f.records[i].active_skill_id, id);
  }
  EXPECT_EQ(f.records.back().skill_phase, SkillPhase::Finishing);
  EXPECT_EQ(f.records.front().skill_phase, SkillPhase::Running);
}

TEST(ControlLoop, QueuedSkillStartsOnTheNextTickWithoutGap) {
  LoopHarness h;
  const std::uint32_t a = h.submit(skill::hold(0.05));
  const std::uint32_t b = h.submit(skill::hold(0.05, skill::Passthrough{skill::PassthroughInterface::Velocity}));
  std::vector<std::optional<std::uint32_t>> ids;
  while (!h.loop.quiescent()) ids.push_back(h.tick().skill_id);
  ASSERT_EQ(ids.size(), 100U);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(ids[i], a);
  for (std::size_t i = 50; i < 100; ++i) EXPECT_EQ(ids[i], b);
  h.collect();
  EXPECT_EQ(h.for_skill(b).front().phase, StatusPhase::Queued);
  EXPECT_EQ(h.for_skill(b).back().phase, StatusPhase::Succeeded);
}

TEST(ControlLoop, ThirdSubmissionIsRejected) {
  LoopHarness h;
  h.submit(skill::hold(0.1));
  h.submit(skill::hold(0.1));
  const std::uint32_t c = h.submit(skill::hold(0.1));
  h.tick();
  h.collect();
  ASSERT_EQ(h.for_skill(c).size(), 1U);
  EXPECT_EQ(h.for_skill(c)[0].phase, StatusPhase::Aborted);
}

TEST(ControlLoop, PreemptStopsActiveSkill) {
  LoopHarness h;
  const std::uint32_t id = h.submit(skill::go_to_joints(panda()->q_initial + JointVector::Constant(0.3), 3.0));
  for (int i = 0; i < 200; ++i) h.tick();
  h.mailbox.post(PreemptSkill{id});
  h.tick();
  h.collect();
  EXPECT_FALSE(h.loop.has_active_skill());
  const auto st = h.for_skill(id);
  ASSERT_EQ(st.size(), 2U);
  EXPECT_EQ(st[1].phase, StatusPhase::Preempted);
  EXPECT_EQ(st[1].cause, TerminationCause::Preempt);
  // Robot holds where it stopped.
  run_until_quiescent(h.loop);
  const JointVector q_stop = st[1].state.q;
  for (int i = 0; i < 500; ++i) h.tick();
  EXPECT_LT((h.loop.state().q - q_stop).cwiseAbs().maxCoeff(), 5e-3);
}

TEST(ControlLoop, PreemptOfUnknownIdIsIgnored) {
  LoopHarness h;
  const std::uint32_t id = h.submit(skill::hold(0.2));
  h.tick();
  h.mailbox.post(PreemptSkill{999});
  h.tick();
  EXPECT_TRUE(h.loop.has_active_skill());
  EXPECT_EQ(h.loop.counters().ignored_preempt, 1U);
  run_until_quiescent(h.loop);
  h.collect();
  EXPECT_EQ(h.for_skill(id).back().cause, TerminationCause::Time);
}

TEST(ControlLoop, ContactFiresOnFirstTickOfInjectedForce) {
  LoopHarness h;
  skill::SkillSpec s = skill::hold(5.0);
  skill::ContactTerm c;
  c.force_threshold.head<3>().setConstant(5.0);
  s.termination = skill::AnyOfTerm{{skill::TimeTerm{5.0}, c}};
  const std::uint32_t id = h.submit(s);
  for (int i = 0; i < 300; ++i) h.tick();
  Wrench w;
  w.force.z() = -6.0;
  h.mailbox.post(InjectWrench{w, 100});
  const TickInfo t = h.tick();
  EXPECT_EQ(t.skill_id, id);
  EXPECT_FALSE(h.loop.has_active_skill());
  h.collect();
  EXPECT_EQ(h.for_skill(id).back().cause, TerminationCause::Contact);
  EXPECT_EQ(h.for_skill(id).back().state.tick, 301U);
}

TEST(ControlLoop, ContactDoesNotFireBelowThreshold) {
  LoopHarness h;
  skill::SkillSpec s = skill::hold(0.5);
  skill::ContactTerm c;
  c.force_threshold.head<3>().setConstant(5.0);
  s.termination = skill::AnyOfTerm{{skill::TimeTerm{0.5}, c}};
  const std::uint32_t id = h.submit(s);
  Wrench w;
  w.force.z() = -4.9;
  h.mailbox.post(InjectWrench{w, 400});
  run_until_quiescent(h.loop);
  h.collect();
  EXPECT_EQ(h.for_skill(id).back().cause, TerminationCause::Time);
}

TEST(ControlLoop, SafetyCapAbortsLongSkills) {
  LoopOptions o;
  o.skill_cap_ticks = 250;
  LoopHarness h(o);
  const std::uint32_t id = h.submit(skill::hold(10.0));
  EXPECT_EQ(run_until_quiescent(h.loop), 250U);
  h.collect();
  EXPECT_EQ(h.for_skill(id).back().phase, StatusPhase::Aborted);
  EXPECT_EQ(h.for_skill(id).back().cause, TerminationCause::SafetyCap);
}

TEST(ControlLoop, InvalidSpecIsAbortedWithoutMotion) {
  LoopHarness h;
  const std::uint32_t id = h.submit(skill::go_to_joints(panda()->q_initial, -1.0));
  h.tick();
  h.collect();
  ASSERT_EQ(h.for_skill(id).size(), 1U);
  EXPECT_EQ(h.for_skill(id)[0].cause, TerminationCause::CommandError);
}

TEST(ControlLoop, WallAbortsPoseSkillBeforePenetration) {
  const ArmModel& m = *panda();
  const Pose start = forward_kinematics(m, m.q_initial);
  LoopOptions o;
  o.safety.ee_half_extents = Eigen::Vector3d::Constant(0.05);
  // Wall face 10 cm in front of the end-effector box.
  o.safety.walls.push_back(
      safety::Box{start.position() + Eigen::Vector3d(0.25, 0, 0), Eigen::Vector3d(0.1, 0.5, 0.5)});
  LoopHarness h(o);
  const Pose goal(start.position() + Eigen::Vector3d(0.3, 0, 0), start.orientation());
  const std::uint32_t id = h.submit(skill::go_to_pose(goal, 2.0, false));
  run_until_quiescent(h.loop);
  h.collect();
  const auto st = h.for_skill(id).back();
  EXPECT_EQ(st.phase, StatusPhase::Aborted);
  EXPECT_EQ(st.cause, TerminationCause::WallViolation);
  const double face = o.safety.walls[0].center.x() - o.safety.walls[0].half_extents.x();
  const double bound = m.ee_linear_speed_max * kControlPeriod;
  for (const RobotState& r : log::parse_log(h.loop.log().serialize()).records) {
    EXPECT_LE(r.ee_pose.position().x() + 0.05 - face, bound);
  }
}

TEST(ControlLoop, StreamedJointSetpointsAreTracked) {
  LoopHarness h;
  const JointVector target = panda()->q_initial + JointVector::Constant(0.1);
  const std::uint32_t id = h.submit(skill::stream_joint_setpoints("js", panda()->q_initial, 2.0));
  h.tick();
  h.mailbox.post(SensorMessage{skill::SensorUpdate{"js", 0.0, skill::JointSetpoint{target}}});
  h.mailbox.post(SensorMessage{skill::SensorUpdate{"other", 0.0, skill::JointSetpoint{target}}});
  run_until_quiescent(h.loop);
  h.collect();
  EXPECT_EQ(h.for_skill(id).back().cause, TerminationCause::Time);
  EXPECT_LT((h.loop.state().q - target).cwiseAbs().maxCoeff(), 2e-3);
  EXPECT_EQ(h.loop.counters().dropped_sensor, 1U);
}

TEST(ControlLoop, MismatchedSensorPayloadAbortsWithCommandError) {
  LoopHarness h;
  const std::uint32_t id = h.submit(skill::stream_joint_setpoints("js", panda()->q_initial, 2.0));
  h.tick();
  h.mailbox.post(SensorMessage{skill::SensorUpdate{"js", 0.0, skill::PoseSetpoint{Pose()}}});
  h.tick();
  h.collect();
  EXPECT_EQ(h.for_skill(id).back().cause, TerminationCause::CommandError);
}

TEST(ControlLoop, GoToJointsReachesGoalAndSettles) {
  LoopHarness h;
  JointVector goal = panda()->q_initial;
  goal << 0.3, -0.5, 0.2, -2.0, 0.1, 1.8, 0.5;
  const std::uint32_t id = h.submit(skill::go_to_joints(goal, 2.0));
  run_until_quiescent(h.loop);
  h.collect();
  EXPECT_EQ(h.for_skill(id).back().cause, TerminationCause::JointGoal);
  EXPECT_LT((h.loop.state().q - goal).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(ControlLoop, GripperSkillsReachWidth) {
  LoopHarness h;
  const std::uint32_t a = h.submit(skill::goto_gripper(0.02, 0.1));
  run_until_quiescent(h.loop);
  h.collect();
  EXPECT_EQ(h.for_skill(a).back().phase, StatusPhase::Succeeded);
  // Arrival is declared inside 1e-4 m of the target.
  EXPECT_LT(std::abs(h.loop.state().gripper_width - 0.02), 1e-4);
  const std::uint32_t b = h.submit(skill::open_gripper(0.1));
  run_until_quiescent(h.loop);
  h.collect();
  EXPECT_EQ(h.for_skill(b).back().phase, StatusPhase::Succeeded);
  EXPECT_LT(std::abs(h.loop.state().gripper_width - kGripperMaxWidth), 1e-4);
}

std::vector<std::uint8_t> scripted_run() {
  LoopHarness h;
  h.submit(skill::go_to_joints(panda()->q_initial + JointVector::Constant(0.05), 0.5));
  run_until_quiescent(h.loop);
  Wrench w;
  w.force = Eigen::Vector3d(1.0, -2.0, 3.0);
  h.mailbox.post(InjectWrench{w, 200});
  h.submit(skill::apply_force(Wrench{Eigen::Vector3d(0, 0, -2), Eigen::Vector3d::Zero()}, 0.3));
  run_until_quiescent(h.loop);
  h.submit(skill::go_to_pose(forward_kinematics(*panda(), panda()->q_initial), 0.5, true));
  run_until_quiescent(h.loop);
  return h.loop.log().serialize();
}

TEST(ControlLoop, IdenticalScriptsProduceIdenticalLogs) {
  const auto a = scripted_run();
  const auto b = scripted_run();
  EXPECT_GT(a.size(), 1000U * log::kRecordSize);
  EXPECT_EQ(a, b);
}

TEST(RobotCore, SimClockAdmissionAndIdle) {
  RobotCore core(panda(), LoopOptions{}, ClockMode::Sim);
  EXPECT_THROW(core.read_state(), NotStarted);
  core.start();
  EXPECT_EQ(core.read_state().tick, 0U);
  const SubmitResult a = core.submit(skill::hold(0.5));
  const SubmitResult b = core.submit(skill::hold(0.5));
  const SubmitResult c = core.submit(skill::hold(0.5));
  EXPECT_TRUE(a.ok());
  EXPECT_TRUE(b.ok());
  // The first may already be done on a fast loop; a third is only refused while two are in flight.
  if (!c.ok()) {
    EXPECT_EQ(c.error, SubmitError::Busy);
  }
  const SubmitResult bad = core.submit(skill::go_to_joints(panda()->q_initial, 0.0));
  EXPECT_EQ(bad.error, SubmitError::Invalid);
  EXPECT_FALSE(bad.violations.empty());
  EXPECT_TRUE(core.wait_idle());
  EXPECT_EQ(core.read_state().tick, c.ok() ? 1500U : 1000U);
  EXPECT_FALSE(core.inject_wrench(Wrench{}, 0.0001));
  core.shutdown();
  EXPECT_FALSE(core.running());
}

TEST(RobotCore, SimClockParksWhileQuiescent) {
  RobotCore core(panda(), LoopOptions{}, ClockMode::Sim);
  core.start();
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  EXPECT_EQ(core.read_state().tick, 0U);
  ASSERT_TRUE(core.inject_wrench(Wrench{}, 0.25));
  EXPECT_TRUE(core.wait_idle());
  EXPECT_EQ(core.read_state().tick, 250U);
  core.shutdown();
}

TEST(RobotCore, RealClockTicksAtRoughlyOneKilohertz) {
  RobotCore core(panda(), LoopOptions{}, ClockMode::Real);
  core.start();
  std::this_thread::sleep_for(std::chrono::milliseconds(500));
  const std::uint64_t ticks = core.read_state().tick;
  core.shutdown();
  EXPECT_GT(ticks, 300U);
  EXPECT_LT(ticks, 700U);
}

}  // namespace
}  // namespace skillstack::core
