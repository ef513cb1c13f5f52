// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/wire/skill_codec.hpp"

namespace skillstack::wire {

using namespace skill;

namespace {

// Deeper than validation allows, so over-nested specs decode and are then
// reported by validate_skill, while hostile input cannot exhaust the stack.
constexpr int kMaxDecodeDepth = 16;

template <typename Fn>
void block(ByteWriter& w, std::uint16_t tag, Fn&& body) {
  w.u16(tag);
  const std::size_t len_at = w.size();
  w.u32(0);
  const std::size_t start = w.size();
  body();
  w.patch_u32(len_at, static_cast<std::uint32_t>(w.size() - start));
}

template <typename Variant>
std::uint16_t tag_of(const Variant& v) {
  return static_cast<std::uint16_t>(v.index() + 1);
}

void write_gen(ByteWriter& w, const TrajGenSpec& g) {
  block(w, tag_of(g), [&] {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, MinJerkJoint>) {
            w.array(s.goal);
            w.f64(s.duration);
          } else if constexpr (std::is_same_v<T, MinJerkPose>) {
            w.pose(s.goal);
            w.f64(s.duration);
          } else if constexpr (std::is_same_v<T, JointDmp>) {
            w.u32(static_cast<std::uint32_t>(s.weights.rows()));
            w.u32(static_cast<std::uint32_t>(s.weights.cols()));
            for (Eigen::Index i = 0; i < s.weights.rows(); ++i) {
              for (Eigen::Index j = 0; j < s.weights.cols(); ++j) w.f64(s.weights(i, j));
            }
            w.array(s.goal);
            w.f64(s.tau);
            w.f64(s.alpha);
            w.f64(s.beta);
            w.f64(s.alpha_x);
            w.u32(s.n_basis);
          } else if constexpr (std::is_same_v<T, StreamedJointSetpoint>) {
            w.array(s.initial);
          } else if constexpr (std::is_same_v<T, StreamedPoseSetpoint>) {
            w.pose(s.initial);
          } else if constexpr (std::is_same_v<T, Hold>) {
          } else if constexpr (std::is_same_v<T, GripperMove>) {
            w.f64(s.command.target_width);
            w.f64(s.command.speed);
            w.f64(s.command.grasp_force);
          } else {
            w.array(s.wrench.as_vector());
            w.f64(s.duration);
          }
        },
        g);
  });
}

void write_feedback(ByteWriter& w, const FeedbackSpec& f) {
  block(w, tag_of(f), [&] {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, InternalJointPd>) {
            w.array(s.kp);
            w.array(s.kd);
          } else if constexpr (std::is_same_v<T, CartesianImpedance>) {
            w.array(s.stiffness);
            w.array(s.damping);
          } else if constexpr (std::is_same_v<T, Passthrough>) {
            w.u16(static_cast<std::uint16_t>(s.interface));
            w.u16(static_cast<std::uint16_t>(s.internal));
          }
        },
        f);
  });
}

void write_term(ByteWriter& w, const TermSpec& t) {
  block(w, tag_of(t.kind), [&] {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, TimeTerm>) {
            w.f64(s.duration);
          } else if constexpr (std::is_same_v<T, JointGoalTerm>) {
            w.f64(s.tolerance);
          } else if constexpr (std::is_same_v<T, PoseGoalTerm>) {
            w.f64(s.position_tolerance);
            w.f64(s.orientation_tolerance);
          } else if constexpr (std::is_same_v<T, ContactTerm>) {
            w.array(s.force_threshold);
          } else {
            w.u32(static_cast<std::uint32_t>(s.children.size()));
            for (const TermSpec& c : s.children) write_term(w, c);
          }
        },
        t.kind);
  });
}

struct Block {
  std::uint16_t tag;
  ByteReader body;
};

Block read_block(ByteReader& r) {
  const std::uint16_t tag = r.u16();
  const std::uint32_t len = r.u32();
  return Block{tag, r.sub(len)};
}

[[noreturn]] void unknown(std::string_view what, std::uint16_t tag) {
  throw WireException(WireError::UnknownVariant, std::string(what) + " tag " + std::to_string(tag));
}

TrajGenSpec read_gen(Block b) {
  ByteReader& r = b.body;
  TrajGenSpec out;
  switch (b.tag) {
    case 1: {
      MinJerkJoint s;
      s.goal = r.fixed_array<7>();
      s.duration = r.f64();
      out = s;
      break;
    }
    case 2: {
      MinJerkPose s;
      s.goal = r.pose();
      s.duration = r.f64();
      out = s;
      break;
    }
    case 3: {
      JointDmp s;
      const std::uint32_t rows = r.u32();
      const std::uint32_t cols = r.u32();
      const std::uint64_t cells = static_cast<std::uint64_t>(rows) * cols;
      if (cells * 8 > r.remaining()) throw WireException(WireError::MalformedBlock, "weights exceed block");
      s.weights.resize(rows, cols);
      for (std::uint32_t i = 0; i < rows; ++i) {
        for (std::uint32_t j = 0; j < cols; ++j) s.weights(i, j) = r.f64();
      }
      s.goal = r.fixed_array<7>();
      s.tau = r.f64();
      s.alpha = r.f64();
      s.beta = r.f64();
      s.alpha_x = r.f64();
      s.n_basis = r.u32();
      out = std::move(s);
      break;
    }
    case 4: out = StreamedJointSetpoint{r.fixed_array<7>()}; break;
    case 5: out = StreamedPoseSetpoint{r.pose()}; break;
    case 6: out = Hold{}; break;
    case 7: {
      GripperMove s;
      s.command.target_width = r.f64();
      s.command.speed = r.f64();
      s.command.grasp_force = r.f64();
      out = s;
      break;
    }
    case 8: {
      ConstantWrench s;
      s.wrench = Wrench::from_vector(r.fixed_array<6>());
      s.duration = r.f64();
      out = s;
      break;
    }
    default: unknown("generator", b.tag);
  }
  r.expect_end("generator block");
  return out;
}

FeedbackSpec read_feedback(Block b) {
  ByteReader& r = b.body;
  FeedbackSpec out;
  switch (b.tag) {
    case 1: {
      InternalJointPd s;
      s.kp = r.fixed_array<7>();
      s.kd = r.fixed_array<7>();
      out = s;
      break;
    }
    case 2: {
      CartesianImpedance s;
      s.stiffness = r.fixed_array<6>();
      s.damping = r.fixed_array<6>();
      out = s;
      break;
    }
    case 3: {
      Passthrough s;
      const std::uint16_t iface = r.u16();
      const std::uint16_t internal = r.u16();
      if (iface > 1 || internal > 1) throw WireException(WireError::UnknownVariant, "passthrough selector");
      s.interface = static_cast<PassthroughInterface>(iface);
      s.internal = static_cast<PassthroughImpedance>(internal);
      out = s;
      break;
    }
    case 4: out = ForceToTorque{}; break;
    default: unknown("feedback", b.tag);
  }
  r.expect_end("feedback block");
  return out;
}

TermSpec read_term(Block b, int depth) {
  if (depth > kMaxDecodeDepth) throw WireException(WireError::MalformedBlock, "terminator nesting too deep");
  ByteReader& r = b.body;
  TermSpec out;
  switch (b.tag) {
    case 1: out = TimeTerm{r.f64()}; break;
    case 2: out = JointGoalTerm{r.f64()}; break;
    case 3: {
      PoseGoalTerm s;
      s.position_tolerance = r.f64();
      s.orientation_tolerance = r.f64();
      out = s;
      break;
    }
    case 4: out = ContactTerm{r.fixed_array<6>()}; break;
    case 5: {
      AnyOfTerm s;
      const std::uint32_t n = r.u32();
      // Each child needs at least a 6-byte block header.
      if (static_cast<std::uint64_t>(n) * 6 > r.remaining()) {
        throw WireException(WireError::MalformedBlock, "AnyOf child count exceeds block");
      }
      for (std::uint32_t i = 0; i < n; ++i) s.children.push_back(read_term(read_block(r), depth + 1));
      out = std::move(s);
      break;
    }
    default: unknown("terminator", b.tag);
  }
  r.expect_end("terminator block");
  return out;
}

}  // namespace

void write_skill_spec(ByteWriter& w, const SkillSpec& spec) {
  w.u16(static_cast<std::uint16_t>(spec.type));
  write_gen(w, spec.traj_gen);
  write_feedback(w, spec.feedback);
  write_term(w, spec.termination);
  block(w, 1, [&] {
    w.u32(static_cast<std::uint32_t>(spec.sensor_topics.size()));
    for (const std::string& t : spec.sensor_topics) w.string(t);
  });
}

SkillSpec read_skill_spec(ByteReader& r) {
  SkillSpec s;
  const std::uint16_t type = r.u16();
  if (type < 1 || type > 6) throw WireException(WireError::UnknownVariant, "skill type " + std::to_string(type));
  s.type = static_cast<SkillType>(type);
  s.traj_gen = read_gen(read_block(r));
  s.feedback = read_feedback(read_block(r));
  s.termination = read_term(read_block(r), 1);
  Block topics = read_block(r);
  if (topics.tag != 1) unknown("sensor topics", topics.tag);
  const std::uint32_t n = topics.body.u32();
  if (static_cast<std::uint64_t>(n) * 4 > topics.body.remaining()) {
    throw WireException(WireError::MalformedBlock, "topic count exceeds block");
  }
  for (std::uint32_t i = 0; i < n; ++i) s.sensor_topics.push_back(topics.body.string());
  topics.body.expect_end("sensor topics block");
  while (!r.empty()) read_block(r);
  return s;
}

std::vector<std::uint8_t> encode_skill_spec(const SkillSpec& spec) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  write_skill_spec(w, spec);
  return out;
}

SkillSpec decode_skill_spec(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  return read_skill_spec(r);
}

}  // namespace skillstack::wire
