// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "routenet/formula.hpp"
#include "routenet/multirel.hpp"
#include "routenet/net.hpp"
#include "routenet/rewrite.hpp"

namespace routenet {

struct RoutingArea {
    Multirelation rel;  // inputs x outputs
    Formula payload_type = Formula::bang(Formula::one());
};

/**
 * Contraction tree per input (left comb over outputs in label order),
 * cocontraction tree per output, R(i,o) wires between them. Free ports:
 * inputs in label order, then outputs in label order.
 */
Net build_area(const RoutingArea& a);
Net build_area(const Multirelation& r);

/** Box-free, structural cells only, one !A on every wire, acyclic. */
bool is_routing_net(const Net& n);

/** Free ports whose wire carries !A away from them (inputs) or towards them (outputs). */
PortId input_port(const Net& n, const std::string& label);
PortId output_port(const Net& n, const std::string& label);
LabelSet input_labels(const Net& n);
LabelSet output_labels(const Net& n);

/** Reads the relation off a normal routing net. Throws NotNormal or NotAreaShaped. */
RoutingArea read_area(const Net& n);

Multirelation semantics(const Net& n, std::size_t budget = kDefaultBudget);
Multirelation path_semantics(const Net& n);

/** Disjoint union; labels of a get "L.", labels of b get "R.". */
Net juxtapose(const Net& a, const Net& b);

/** Joins output o to input i and normalizes. Throws CycleRisk when a path already leads from i to o. */
Net trace_net(const Net& a, const std::string& i, const std::string& o, std::size_t budget = kDefaultBudget);

/** Juxtaposes a and b, then joins a's outs[k] to b's ins[k] in order. */
Net compose_areas(const Net& a, const LabelSet& outs, const Net& b, const LabelSet& ins,
                  std::size_t budget = kDefaultBudget);

/** A closed box around a One, with one free port "payload". */
Net payload_box();

struct TransitResult {
    std::map<std::string, Count> copies;  // per output label
    Net residual;                         // the normal form with every copy replaced by a coweakening
};

/**
 * Feeds `payload` (a net whose only free port carries a closed box) into
 * input i through a fresh cocontraction, keeping i open, and normalizes.
 */
TransitResult transit(const Net& a, const std::string& i, const Net& payload, std::size_t budget = kDefaultBudget);
TransitResult transit(const Net& a, const std::string& i, std::size_t budget = kDefaultBudget);

/** The 3-communication area. */
Net gamma();
/** The 4-communication area without the pairs (3,1) and (3,2). */
Net delta();
Multirelation delta_relation();

}  // namespace routenet
