// Copyright 2026 The kinex Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace kinex {

inline constexpr const char* project_name = "kinex";
inline constexpr const char* project_version = "0.1.0";

}  // namespace kinex
