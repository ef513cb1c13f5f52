// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "skillstack/skill_builders.hpp"
#include "skillstack/wire/crc32.hpp"
#include "skillstack/wire/frame.hpp"
#include "skillstack/wire/messages.hpp"
#include "skillstack/wire/skill_codec.hpp"
#include "wire_fuzz.hpp"

namespace skillstack::wire {
namespace {

std::vector<std::uint8_t> bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

TEST(Crc32, MatchesStandardCheckValue) {
  const auto b = bytes_of("123456789");
  EXPECT_EQ(crc32(b), 0xCBF43926U);
  EXPECT_EQ(crc32({}), 0U);
  // Chaining over a split equals the one-shot value.
  EXPECT_EQ(crc32(std::span(b).subspan(4), crc32(std::span(b).first(4))), 0xCBF43926U);
}

TEST(Frame, PreemptGoldenBytes) {
  // Hand-laid header plus zlib CRC-32 (tests/oracles/wire_oracle.py).
  const std::vector<std::uint8_t> golden = {0x46, 0x49, 0x46, 0x50, 0x01, 0x02, 0x00, 0x00,
                                            0x00, 0x00, 0x00, 0x00, 0xde, 0xce, 0x17, 0x3e};
  EXPECT_EQ(encode_frame(MessageType::PreemptSkill, 0, encode(PreemptMsg{})), golden);
  const Frame f = decode_frame(golden);
  EXPECT_EQ(f.msg_type, 0x02);
  EXPECT_EQ(f.robot_id, 0);
  EXPECT_TRUE(f.payload.empty());
}

TEST(SkillCodec, HoldSpecGoldenBytes) {
  const std::vector<std::uint8_t> golden = {
      0x01, 0x00,                                                  // JointPositionSkill
      0x06, 0x00, 0x00, 0x00, 0x00, 0x00,                          // Hold
      0x03, 0x00, 0x04, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,  // Passthrough{position, joint}
      0x01, 0x00, 0x08, 0x00, 0x00, 0x00,                          // Time
      0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xf0, 0x3f,              //   1.0
      0x01, 0x00, 0x04, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,  // no topics
  };
  ASSERT_EQ(golden.size(), 42U);
  const skill::SkillSpec spec = skill::hold(1.0);
  EXPECT_EQ(encode_skill_spec(spec), golden);
  EXPECT_EQ(decode_skill_spec(golden), spec);
}

TEST(SkillCodec, UnknownTrailingBlocksAreSkipped) {
  std::vector<std::uint8_t> b = encode_skill_spec(skill::hold(1.0));
  const std::vector<std::uint8_t> extra = {0x09, 0x00, 0x03, 0x00, 0x00, 0x00, 0xaa, 0xbb, 0xcc};
  b.insert(b.end(), extra.begin(), extra.end());
  EXPECT_EQ(decode_skill_spec(b), skill::hold(1.0));
}

TEST(SkillCodec, UnknownVariantTagIsReported) {
  std::vector<std::uint8_t> b = encode_skill_spec(skill::hold(1.0));
  b[2] = 0x42;
  try {
    decode_skill_spec(b);
    FAIL();
  } catch (const WireException& e) {
    EXPECT_EQ(e.kind(), WireError::UnknownVariant);
  }
}

TEST(SkillCodec, DeepNestingIsRejected) {
  skill::TermSpec t = skill::TimeTerm{1.0};
  for (int i = 0; i < 40; ++i) t = skill::AnyOfTerm{{t}};
  skill::SkillSpec s = skill::hold(1.0);
  s.termination = t;
  EXPECT_THROW(decode_skill_spec(encode_skill_spec(s)), WireException);
}

TEST(Frame, RejectsBadMagicCrcAndOversize) {
  std::vector<std::uint8_t> f = encode_frame(MessageType::SubscribeState, 3, encode(SubscribeMsg{50}));
  auto kind_of = [](const std::vector<std::uint8_t>& b) {
    try {
      decode_frame(b);
    } catch (const WireException& e) {
      return e.kind();
    }
    return WireError::EncodeNonFinite;  // sentinel: no error
  };
  auto bad = f;
  bad[0] = 'X';
  EXPECT_EQ(kind_of(bad), WireError::BadMagic);
  bad = f;
  bad[13] ^= 0x10;
  EXPECT_EQ(kind_of(bad), WireError::BadCrc);
  bad = f;
  bad.pop_back();
  EXPECT_EQ(kind_of(bad), WireError::Truncated);
  bad = f;
  const std::uint32_t huge = kMaxPayload + 1;
  std::memcpy(bad.data() + 8, &huge, 4);
  EXPECT_EQ(kind_of(bad), WireError::Oversize);
}

TEST(FrameDecoder, ResyncsAfterGarbageAndBadCrc) {
  const auto good1 = encode_frame(MessageType::PreemptSkill, 1, encode(PreemptMsg{5}));
  const auto good2 = encode_frame(MessageType::SubscribeState, 2, encode(SubscribeMsg{10}));
  auto corrupt = good1;
  corrupt.back() ^= 0xff;
  std::vector<std::uint8_t> stream = bytes_of("garbage F FI");
  stream.insert(stream.end(), good1.begin(), good1.end());
  stream.insert(stream.end(), corrupt.begin(), corrupt.end());
  stream.insert(stream.end(), good2.begin(), good2.end());

  // Byte-at-a-time feeding must give the same events as one big feed.
  for (bool trickle : {false, true}) {
    FrameDecoder d;
    std::vector<DecodeEvent> events;
    if (trickle) {
      for (std::uint8_t b : stream) {
        d.feed(std::span(&b, 1));
        while (auto e = d.next()) events.push_back(*e);
      }
    } else {
      d.feed(stream);
      while (auto e = d.next()) events.push_back(*e);
    }
    std::vector<Frame> frames;
    int bad_magic = 0, bad_crc = 0;
    for (const DecodeEvent& e : events) {
      if (e.ok()) {
        frames.push_back(std::get<Frame>(e.value));
      } else if (std::get<WireError>(e.value) == WireError::BadMagic) {
        ++bad_magic;
      } else if (std::get<WireError>(e.value) == WireError::BadCrc) {
        ++bad_crc;
      }
    }
    ASSERT_EQ(frames.size(), 2U) << "trickle=" << trickle;
    EXPECT_EQ(frames[0], decode_frame(good1));
    EXPECT_EQ(frames[1], decode_frame(good2));
    EXPECT_GE(bad_magic, 1);
    EXPECT_EQ(bad_crc, 1);
    EXPECT_FALSE(d.finish());
  }
}

TEST(FrameDecoder, PartialFrameAtEndIsTruncated) {
  const auto f = encode_frame(MessageType::PreemptSkill, 1, encode(PreemptMsg{5}));
  FrameDecoder d;
  d.feed(std::span(f).first(f.size() - 1));
  EXPECT_FALSE(d.next());
  auto e = d.finish();
  ASSERT_TRUE(e);
  EXPECT_EQ(std::get<WireError>(e->value), WireError::Truncated);
}

TEST(StateRecord, LayoutOffsets) {
  RobotState s;
  s.tick = 0x0102030405060708ULL;
  s.wall_ns = 99;
  s.q[0] = 1.5;
  s.ee_pose = Pose::from_wxyz(Eigen::Vector3d(0.1, 0.2, 0.3), 1, 0, 0, 0);
  s.gripper_width = 0.04;
  s.gripper_moving = true;
  s.active_skill_id = 17;
  s.skill_phase = SkillPhase::Finishing;
  const StateRecord r = encode_state_record(s);
  std::uint64_t tick;
  std::memcpy(&tick, r.data(), 8);
  EXPECT_EQ(tick, s.tick);
  double d;
  std::memcpy(&d, r.data() + 16, 8);
  EXPECT_EQ(d, 1.5);
  std::memcpy(&d, r.data() + 240, 8);
  EXPECT_EQ(d, 0.1);
  std::memcpy(&d, r.data() + 264, 8);
  EXPECT_EQ(d, 1.0);
  std::memcpy(&d, r.data() + 344, 8);
  EXPECT_EQ(d, 0.04);
  std::uint32_t id;
  std::memcpy(&id, r.data() + 352, 4);
  EXPECT_EQ(id, 17U);
  EXPECT_EQ(r[356], 2);
  EXPECT_EQ(r[357], 1);
  EXPECT_EQ(r[358], 0);
  EXPECT_EQ(r[359], 0);
  EXPECT_EQ(decode_state_record(r), s);
}

TEST(StateRecord, RejectsNonFiniteAndMalformed) {
  RobotState s;
  s.dq[4] = std::numeric_limits<double>::infinity();
  try {
    encode_state_record(s);
    FAIL();
  } catch (const WireException& e) {
    EXPECT_EQ(e.kind(), WireError::EncodeNonFinite);
  }
  StateRecord r = encode_state_record(RobotState{});
  r[356] = 9;
  EXPECT_THROW(decode_state_record(r), WireException);
  r = encode_state_record(RobotState{});
  r[359] = 1;
  EXPECT_THROW(decode_state_record(r), WireException);
  r = encode_state_record(RobotState{});
  const double zero = 0.0;
  std::memcpy(r.data() + 264, &zero, 8);  // w = 0 with x = y = z = 0
  EXPECT_THROW(decode_state_record(r), WireException);
}

TEST(Messages, AckAndStatusRoundTrip) {
  AckMsg a{ErrorCode::Invalid, 0x01, 0, "skill rejected", {"bad duration", "bad goal"}};
  EXPECT_EQ(decode_ack(encode(a)), a);
  SkillStatusMsg st;
  st.skill_id = 3;
  st.phase = StatusPhase::Aborted;
  st.cause = skill::TerminationCause::WallViolation;
  EXPECT_EQ(decode_status(encode(st)), st);
  EXPECT_EQ(phase_for(skill::TerminationCause::Time), StatusPhase::Succeeded);
  EXPECT_EQ(phase_for(skill::TerminationCause::Contact), StatusPhase::Succeeded);
  EXPECT_EQ(phase_for(skill::TerminationCause::Preempt), StatusPhase::Preempted);
  EXPECT_EQ(phase_for(skill::TerminationCause::WallViolation), StatusPhase::Aborted);
  EXPECT_EQ(phase_for(skill::TerminationCause::SafetyCap), StatusPhase::Aborted);
  EXPECT_EQ(phase_for(skill::TerminationCause::CommandError), StatusPhase::Aborted);
}

TEST(StateRecord, ZeroStateGoldenBytes) {
  // Everything zero except the identity quaternion's w = 1.0 at offset 264.
  StateRecord golden{};
  const std::uint8_t one[8] = {0, 0, 0, 0, 0, 0, 0xf0, 0x3f};
  std::memcpy(golden.data() + 264, one, 8);
  EXPECT_EQ(encode_state_record(RobotState{}), golden);
}

TEST(FrameDecoder, RecoversAfterRandomGarbageBursts) {
  testing::WireFuzzer f(4242);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> stream;
    std::vector<Frame> sent;
    for (int i = 0; i < 4; ++i) {
      const std::size_t n = f.pick(65);
      for (std::size_t k = 0; k < n; ++k) stream.push_back(static_cast<std::uint8_t>(f.pick(256)));
      auto c = f.message();
      const auto bytes = encode_frame(c.type, static_cast<std::uint16_t>(i), c.payload);
      stream.insert(stream.end(), bytes.begin(), bytes.end());
      sent.push_back(decode_frame(bytes));
    }
    FrameDecoder d;
    d.feed(stream);
    std::vector<Frame> got;
    while (auto e = d.next()) {
      if (e->ok()) got.push_back(std::get<Frame>(e->value));
    }
    // Garbage can only add frames if it happens to contain a valid one.
    ASSERT_GE(got.size(), sent.size()) << "trial " << trial;
    std::size_t j = 0;
    for (const Frame& g : got) {
      if (j < sent.size() && g == sent[j]) ++j;
    }
    EXPECT_EQ(j, sent.size()) << "trial " << trial;
  }
}

TEST(WireFuzz, RandomRoundTripsAndAdversarialInputs) {
  const testing::FuzzReport r = testing::run_wire_fuzz(20000, 12345);
  EXPECT_EQ(r.round_trip_failures, 0U) << r.first_failure;
  EXPECT_EQ(r.unexpected_exceptions, 0U) << r.first_failure;
}

TEST(WireFuzz, EveryPrefixOfAFrameStreamIsHandled) {
  testing::WireFuzzer f(99);
  for (int k = 0; k < 50; ++k) {
    auto c = f.message();
    const auto bytes = encode_frame(c.type, 1, c.payload);
    for (std::size_t n = 0; n <= bytes.size(); ++n) {
      FrameDecoder d;
      d.feed(std::span(bytes).first(n));
      std::optional<DecodeEvent> e = d.next();
      if (n == bytes.size()) {
        ASSERT_TRUE(e && e->ok());
      } else {
        ASSERT_FALSE(e);
        auto end = d.finish();
        ASSERT_EQ(static_cast<bool>(end), n > 0);
      }
      for (std::size_t m = 0; m <= c.payload.size(); m += 1 + c.payload.size() / 16) {
        try {
          testing::WireFuzzer::decode_any(c.type, std::span(c.payload).first(m));
        } catch (const WireException&) {
        }
      }
    }
  }
}

}  // namespace
}  // namespace skillstack::wire
