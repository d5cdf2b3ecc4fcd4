// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "routenet/net.hpp"

namespace routenet {

/**
 * Representative of a net's class under associativity/commutativity of
 * (co)contraction trees, neutrality of (co)weakening, and renaming of ids.
 * `key` is a complete invariant: two nets are equivalent iff keys match.
 */
struct CanonicalNet {
    Net net;
    std::string key;
};

CanonicalNet canonical_form(const Net& n);
Net canonicalize(const Net& n);
std::string canonical_key(const Net& n);

/** Absorbs (co)weakenings hanging off (co)contractions, leaving all else as is. */
Net absorb_neutral(const Net& n);

bool canonical_equal(const Net& a, const Net& b);
bool canonical_equal(const NetSum& a, const NetSum& b);

/** Canonical summands sorted by key with duplicates removed. */
NetSum canonicalize(const NetSum& s);
std::vector<std::string> canonical_keys(const NetSum& s);

/** Search-node limit of the labelling search; exceeding it throws CanonBudget. */
inline constexpr std::size_t kCanonSearchBudget = 200000;

}  // namespace routenet
