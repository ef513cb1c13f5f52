// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skillstack/skill_spec.hpp"
#include "skillstack/wire/bytes.hpp"

namespace skillstack::wire {

// Layout: skill_type u16, then four blocks (generator, feedback,
// termination, sensor topics), each tag u16 + length u32 + fields. Any
// further well-formed blocks are ignored by the decoder.
std::vector<std::uint8_t> encode_skill_spec(const skill::SkillSpec& spec);
skill::SkillSpec decode_skill_spec(std::span<const std::uint8_t> bytes);

void write_skill_spec(ByteWriter& w, const skill::SkillSpec& spec);
skill::SkillSpec read_skill_spec(ByteReader& r);

}  // namespace skillstack::wire
