// Copyright (C) 2026 The ctcprep Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>

#include "ctcprep/ctc.hpp"

namespace ctcprep::detail {

// Blank-interleaved label lattice: state 2i is a blank, state 2i+1 is
// labels[i]; 2L+1 states in total.
class Lattice {
public:
    Lattice(std::span<const Token> labels, Token blank);

    std::size_t size() const noexcept { return 2 * labels_.size() + 1; }
    Token token(std::size_t s) const { return s % 2 == 0 ? blank_ : labels_[s / 2]; }
    bool can_skip(std::size_t s) const;

private:
    std::span<const Token> labels_;
    Token blank_;
};

}  // namespace ctcprep::detail
