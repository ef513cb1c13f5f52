// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#pragma once

#include "skillstack/safety.hpp"
#include "toml_util.hpp"

namespace skillstack::detail {

safety::SafetyConfig read_safety(const TomlReader& t);

}  // namespace skillstack::detail
