// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "routenet/net.hpp"

namespace routenet {

/** Compact JSON; wires are always written with "dir":"ab". */
std::string serialize(const NetSum& s);
std::string serialize(const Net& n);
/** A `{"sum": [...]}` document; with `accept_single`, also one bare net. */
NetSum parse_net_sum(std::string_view text, bool accept_single = false);

std::string to_dot(const Net& n);
std::string to_dot(const NetSum& s);

}  // namespace routenet
