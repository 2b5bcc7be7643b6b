// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <stdexcept>

namespace plansim {

/// Fatal input or contract error. The message names the offending entity
/// (path, document id, goal id, keyword, flag).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace plansim
