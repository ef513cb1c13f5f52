// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/control_loop.hpp"

namespace skillstack::core {

using skill::TerminationCause;

ControlLoop::ControlLoop(std::shared_ptr<const ArmModel> model, CommandMailbox& mailbox, LoopOptions options)
    : model_(std::move(model)),
      mailbox_(mailbox),
      options_(std::move(options)),
      sim_(*model_, options_.q0.value_or(model_->q_initial)),
      safety_(options_.safety),
      hold_q_(sim_.state().q),
      log_(options_.robot_id) {}

bool ControlLoop::has_work() const { return active_ || queued_ || !injections_.empty(); }

bool ControlLoop::quiescent() const { return !has_work() && mailbox_.empty(); }

LoopCounters ControlLoop::counters() const {
  return LoopCounters{dropped_sensor_.load(), dropped_state_.load(), ignored_preempt_.load(), limit_clamps_.load()};
}

std::vector<wire::SkillStatusMsg> ControlLoop::take_status() {
  const std::lock_guard<std::mutex> lock(status_mutex_);
  std::vector<wire::SkillStatusMsg> out(std::make_move_iterator(status_.begin()),
                                        std::make_move_iterator(status_.end()));
  status_.clear();
  return out;
}

void ControlLoop::emit(wire::SkillStatusMsg msg) {
  const bool terminal = wire::is_terminal(msg.phase);
  const std::uint32_t id = msg.skill_id;
  {
    const std::lock_guard<std::mutex> lock(status_mutex_);
    status_.push_back(std::move(msg));
  }
  output_pending_ = true;
  if (terminal && on_terminal_) on_terminal_(id);
}

void ControlLoop::reject(std::uint32_t skill_id, const RobotState& s) {
  emit(wire::SkillStatusMsg{skill_id, wire::StatusPhase::Aborted, TerminationCause::CommandError, s});
}

void ControlLoop::activate(SubmitSkill submit) {
  const RobotState& live = sim_.state();
  if (!skill::validate_skill(submit.spec).empty()) {
    reject(submit.skill_id, live);
    return;
  }
  try {
    active_.emplace(submit.skill_id, std::move(submit.spec), *model_, live);
    if (auto g = active_->gripper_command()) sim_.command_gripper(*g);
  } catch (const std::exception&) {
    active_.reset();
    reject(submit.skill_id, live);
    return;
  }
  emit(wire::SkillStatusMsg{submit.skill_id, wire::StatusPhase::Running, std::nullopt, live});
}

void ControlLoop::finish(TerminationCause cause, const RobotState& final_state) {
  if (!active_) return;
  const std::uint32_t id = active_->id();
  if (active_->gripper_command() && cause == TerminationCause::Preempt) {
    sim_.command_gripper(GripperCommand{sim_.gripper().width, 0.05, 0.0});
  }
  active_.reset();
  hold_q_ = final_state.q;
  emit(wire::SkillStatusMsg{id, wire::phase_for(cause), cause, final_state});
}

void ControlLoop::handle(MailboxMessage& msg) {
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SubmitSkill>) {
          if (!active_ && !queued_) {
            activate(std::move(m));
          } else if (!queued_) {
            emit(wire::SkillStatusMsg{m.skill_id, wire::StatusPhase::Queued, std::nullopt, sim_.state()});
            queued_ = std::move(m);
          } else {
            reject(m.skill_id, sim_.state());
          }
        } else if constexpr (std::is_same_v<T, PreemptSkill>) {
          if (m.all && queued_) {
            emit(wire::SkillStatusMsg{queued_->skill_id, wire::StatusPhase::Preempted, TerminationCause::Preempt,
                                      sim_.state()});
            queued_.reset();
          }
          if (active_ && (m.all || m.skill_id == 0 || m.skill_id == active_->id())) {
            finish(TerminationCause::Preempt, sim_.state());
          } else if (queued_ && m.skill_id == queued_->skill_id) {
            emit(wire::SkillStatusMsg{m.skill_id, wire::StatusPhase::Preempted, TerminationCause::Preempt,
                                      sim_.state()});
            queued_.reset();
          } else if (!m.all) {
            ignored_preempt_.fetch_add(1, std::memory_order_relaxed);
          }
          if (!active_ && queued_) {
            SubmitSkill next = std::move(*queued_);
            queued_.reset();
            activate(std::move(next));
          }
        } else if constexpr (std::is_same_v<T, SensorMessage>) {
          if (!active_ || !active_->subscribes(m.update.topic)) {
            dropped_sensor_.fetch_add(1, std::memory_order_relaxed);
            return;
          }
          try {
            active_->apply(m.update);
          } catch (const std::exception&) {
            finish(TerminationCause::CommandError, sim_.state());
          }
        } else if constexpr (std::is_same_v<T, InjectWrench>) {
          if (m.duration_ticks > 0) injections_.push_back(Injection{m.wrench, m.duration_ticks});
        } else {
          safety_ = std::move(m.config);
        }
      },
      msg);
}

void ControlLoop::drain() {
  for (std::size_t i = 0; i < kMaxDrainPerTick; ++i) {
    std::optional<MailboxMessage> msg = mailbox_.take();
    if (!msg) break;
    handle(*msg);
  }
  if (!active_ && queued_) {
    SubmitSkill next = std::move(*queued_);
    queued_.reset();
    activate(std::move(next));
  }
}

void ControlLoop::service_mailbox() {
  drain();
  if (output_pending_ && on_output_) on_output_();
  output_pending_ = false;
}

void ControlLoop::publish_initial() {
  if (snapshot_.sequence() == 0) snapshot_.publish(wire::encode_state_record(sim_.state()));
}

TickInfo ControlLoop::tick(std::uint64_t wall_ns) {
  sim_.set_wall_ns(wall_ns);
  drain();

  Wrench injected;
  for (Injection& inj : injections_) {
    injected = injected + inj.wrench;
    --inj.remaining;
  }
  std::erase_if(injections_, [](const Injection& inj) { return inj.remaining == 0; });

  const RobotState before = sim_.state();
  std::optional<std::uint32_t> skill_id;
  std::optional<TerminationCause> cause;
  RobotCommand cmd = RobotCommand::hold(hold_q_);

  if (active_) {
    skill_id = active_->id();
    try {
      cmd = active_->command(before);
    } catch (const std::exception&) {
      cause = TerminationCause::CommandError;
      cmd = RobotCommand::hold(before.q);
    }
    if (!cause && safety_.enabled) {
      SimRobot preview = sim_;
      const StepResult p = preview.step(cmd, injected);
      if (p.limits.position ||
          safety::check_safety(safety_, preview.state().ee_pose, preview.state().q, *model_).has_value()) {
        cause = TerminationCause::WallViolation;
        cmd = RobotCommand::hold(before.q);
      }
    }
  }

  const StepResult res = sim_.step(cmd, injected);
  if (res.limits.any()) limit_clamps_.fetch_add(1, std::memory_order_relaxed);
  if (active_ && !cause && res.rejected_command) cause = TerminationCause::CommandError;

  if (active_ && !cause) {
    cause = active_->check_termination(sim_.state());
    if (!cause && active_->elapsed_ticks() >= options_.skill_cap_ticks) cause = TerminationCause::SafetyCap;
  }

  SkillPhase phase = SkillPhase::Idle;
  if (skill_id) {
    phase = !cause ? SkillPhase::Running
                   : (wire::phase_for(*cause) == wire::StatusPhase::Succeeded ? SkillPhase::Finishing
                                                                             : SkillPhase::Aborted);
  }
  sim_.set_skill_info(skill_id, phase);

  const RobotState& after = sim_.state();
  RobotState rec = before;
  rec.tau_commanded = after.tau_commanded;
  rec.tau_external = after.tau_external;
  rec.ee_wrench_external = after.ee_wrench_external;
  rec.active_skill_id = skill_id;
  rec.skill_phase = phase;
  log_.append(wire::encode_state_record(rec));

  const wire::StateRecord published = wire::encode_state_record(after);
  snapshot_.publish(published);
  const std::uint32_t divisor = publish_divisor_.load(std::memory_order_relaxed);
  if (divisor != 0 && after.tick % divisor == 0) {
    if (published_.push(published)) {
      output_pending_ = true;
    } else {
      dropped_state_.fetch_add(1, std::memory_order_relaxed);
    }
  }

  if (cause) finish(*cause, after);

  if (output_pending_ && on_output_) on_output_();
  output_pending_ = false;

  return TickInfo{before.tick, true, cmd.mode, res.reference_q, skill_id, res.limits};
}

}  // namespace skillstack::core
