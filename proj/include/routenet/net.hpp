// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "routenet/formula.hpp"

namespace routenet {

using PortId = std::int64_t;
using CellId = std::int64_t;

enum class Symbol { One, Tensor, Par, Dereliction, Contraction, Weakening, Cocontraction, Coweakening, Box };

/** JSON name of a symbol: one, tensor, par, der, con, weak, cocon, coweak, box. */
const char* symbol_name(Symbol s);
std::optional<Symbol> symbol_from_name(std::string_view name);
/** Fixed auxiliary arity, or -1 for boxes. */
int symbol_arity(Symbol s);

struct Net;

struct Cell {
    CellId id = 0;
    Symbol sym = Symbol::One;
    PortId principal = 0;
    std::vector<PortId> aux;
    std::shared_ptr<const Net> inner;  // boxes only; shared, never mutated in place

    bool is_box() const { return sym == Symbol::Box; }
    bool is_closed_box() const { return sym == Symbol::Box && aux.empty(); }
};

/** `type` is read from a to b; the reversed wire carries its dual. */
struct Wire {
    PortId a = 0;
    PortId b = 0;
    Formula type;
};

struct FreePort {
    PortId port = 0;
    std::string label;
};

/**
 * A proof net. Port typing convention: the formula read away from a cell
 * through its principal port is the principal type, the formula read into
 * the cell through an auxiliary port is that port's type. Inside a box, the
 * wire at free port 0 read towards the port is A when the box is !A, and
 * the wire at free port k read away from the port is the door type !B.
 */
struct Net {
    std::vector<FreePort> free;
    std::vector<Cell> cells;
    std::vector<Wire> wires;
    std::int64_t next_id = 0;  // fresh-id supply; ids at or above it are unused

    const Cell* find_cell(CellId id) const;
    const FreePort* find_free(std::string_view label) const;
    bool has_boxes() const;
    /** Cells at this level and inside every box. */
    std::size_t total_cells() const;
    /** Recomputes next_id from the largest id in use at this level. */
    void reset_next_id();
};

struct NetSum {
    std::vector<Net> summands;  // empty: the zero net

    NetSum() = default;
    explicit NetSum(Net n) { summands.push_back(std::move(n)); }
    bool is_zero() const { return summands.empty(); }
};

/** Where a port is used at one level of a net. */
struct PortUse {
    int cell = -1;  // index into Net::cells, -1 for a free port
    int slot = -1;  // 0 principal, k >= 1 auxiliary k-1; free-list index for free ports
    int wire = -1;  // index into Net::wires
};

using PortTable = std::unordered_map<PortId, PortUse>;
PortTable index_ports(const Net& n);

/** Formula on the wire at port p read away from p. */
Formula outward_type(const Net& n, const PortTable& t, PortId p);
/** Formula on the wire at port p read towards p. */
Formula inward_type(const Net& n, const PortTable& t, PortId p);

struct Violation {
    std::string rule;
    std::vector<std::int64_t> ids;
    std::string detail;
};

std::vector<Violation> validate(const Net& n);
std::string format_violations(const std::vector<Violation>& v);

/**
 * Mutable view of one level of a net. Wires are kept as a symmetric link
 * table so rules can cut and rejoin them cheaply; build() returns a Net
 * with cells sorted by id and wires sorted by their smaller port.
 */
class NetEditor {
public:
    NetEditor() = default;
    explicit NetEditor(const Net& n);

    std::int64_t fresh() { return next_id_++; }
    std::int64_t next_id() const { return next_id_; }

    CellId add_cell(Symbol s, std::size_t n_aux, std::shared_ptr<const Net> inner = nullptr);
    const Cell& cell(CellId id) const;
    bool has_cell(CellId id) const { return cells_.count(id) != 0; }
    void remove_cell(CellId id);
    const std::map<CellId, Cell>& cells() const { return cells_; }
    void set_inner(CellId id, std::shared_ptr<const Net> inner);
    void remove_aux(CellId id, std::size_t k);

    PortId add_free(std::string label);
    void add_free_port(PortId p, std::string label);
    void remove_free(PortId p);
    bool is_free(PortId p) const;
    const std::vector<FreePort>& free() const { return free_; }
    std::vector<FreePort>& free() { return free_; }
    /** Port of the unique free port with this label; throws if absent or ambiguous. */
    PortId free_port(std::string_view label) const;
    std::vector<PortId> free_ports(std::string_view label) const;

    /** Adds a wire reading f from a to b. Both ports must be unlinked. */
    void connect(PortId a, PortId b, Formula f);
    void disconnect(PortId p);
    bool linked(PortId p) const { return link_.count(p) != 0; }
    PortId partner(PortId p) const;
    /** Formula read from p to its partner. */
    Formula type_from(PortId p) const;

    /** Removes the wires at u and v and joins their far ends. */
    void bridge(PortId u, PortId v);
    /** Moves the wire at `from` to the unlinked port `to`, keeping its reading. */
    void rehome(PortId from, PortId to);
    /** bridge() for two free ports, dropping both from the free list. */
    void fuse(PortId p, PortId q);
    /** Connects a free port's wire to an unlinked cell port and drops the free port. */
    void plug(PortId free_port, PortId cell_port);

    /**
     * Copies every cell and wire of `sub` under fresh ids. Free ports of
     * `sub` become free ports here with the same labels. Returns the port
     * renaming (old id -> new id) for the copied level.
     */
    std::unordered_map<PortId, PortId> splice(const Net& sub);

    Net build() const;

private:
    std::map<CellId, Cell> cells_;
    std::unordered_map<PortId, std::pair<PortId, Formula>> link_;
    std::vector<FreePort> free_;
    std::int64_t next_id_ = 0;
};

}  // namespace routenet
