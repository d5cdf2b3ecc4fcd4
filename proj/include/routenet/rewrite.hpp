// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "routenet/errors.hpp"
#include "routenet/net.hpp"

namespace routenet {

enum class Rule { m, e, d, er, c, nd, ba, s1, s2, eps_ww, zero_wd };

const char* rule_name(Rule r);

enum class Policy { SurfaceOnly, AnyDepthEEr, All };

/**
 * A cut ready to fire. `path` lists the boxes entered from the surface.
 * Cell roles per rule: m (tensor, par), e/d/er (der/con/weak, box),
 * c (closed box, box owning the door), nd (der, cocon), zero_wd (coweak, der),
 * ba (cocon, con), s1 (coweak, con), s2 (cocon, weak), eps_ww (coweak, weak).
 */
struct Redex {
    Rule rule = Rule::m;
    std::vector<CellId> path;
    CellId first = 0;
    CellId second = 0;
    PortId wire = 0;        // smaller endpoint of the cut wire
    std::size_t door = 0;   // c only: auxiliary index on `second`

    std::size_t depth() const { return path.size(); }
    /** `depth rule site`, site being `[box.]first,second/wire`. */
    std::string describe() const;
};

/** Sorted by (depth, path, smaller cell id, wire). */
std::vector<Redex> find_redexes(const Net& n, Policy policy);

/** Summands of the right-hand side; throws StaleRedex when the site no longer matches. */
NetSum apply(const Net& n, const Redex& r);

/** The strategy's choice: lowest surface redex, else lowest in-box e/er redex. */
std::optional<Redex> next_redex(const Net& n, bool reverse = false);

class BudgetExhausted : public Error {
public:
    BudgetExhausted(NetSum partial, std::size_t budget)
        : Error(ErrorKind::BudgetExhausted, "reduction budget of " + std::to_string(budget) + " steps exhausted"),
          partial_(std::move(partial)) {}
    const NetSum& partial() const { return partial_; }

private:
    NetSum partial_;
};

inline constexpr std::size_t kDefaultBudget = 10000;

struct NormalizeOptions {
    std::size_t budget = kDefaultBudget;  // steps per summand lineage
    bool reverse = false;                 // pick the highest site instead of the lowest
    std::ostream* trace = nullptr;
};

struct NormalizeStats {
    std::size_t steps = 0;
};

/** Normal form as a canonical, duplicate-free sum. */
NetSum normalize(const NetSum& s, const NormalizeOptions& opt = {}, NormalizeStats* stats = nullptr);
NetSum normalize(const Net& n, const NormalizeOptions& opt = {}, NormalizeStats* stats = nullptr);

struct ReductionGraph {
    std::vector<NetSum> nodes;  // node 0 is the start
    std::vector<std::vector<std::size_t>> edges;
    bool truncated = false;

    std::vector<std::size_t> sinks() const;
    bool has_cycle() const;
};

/** Every one-step reduct under Policy::All, nodes identified up to canonical equality. */
ReductionGraph reduction_graph(const Net& n, std::size_t node_budget);

}  // namespace routenet
