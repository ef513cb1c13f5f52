// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace skillstack::wire {

// CRC-32/ISO-HDLC (reflected 0xEDB88320, init and xorout 0xFFFFFFFF).
std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t crc = 0);

}  // namespace skillstack::wire
