// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace routenet {

using Count = std::uint64_t;
using LabelSet = std::vector<std::string>;

/**
 * A map domain x codomain -> N stored as a dense matrix.
 *
 * Label order only matters for printing; equality and all operations look
 * labels up by name.
 */
class Multirelation {
public:
    Multirelation() = default;
    Multirelation(LabelSet domain, LabelSet codomain);

    static Multirelation from_rows(LabelSet domain, LabelSet codomain,
                                   const std::vector<std::vector<Count>>& rows);
    static Multirelation identity(const LabelSet& labels);

    const LabelSet& domain() const { return dom_; }
    const LabelSet& codomain() const { return cod_; }
    std::size_t rows() const { return dom_.size(); }
    std::size_t cols() const { return cod_.size(); }

    Count at(std::size_t i, std::size_t j) const { return m_[i * cod_.size() + j]; }
    void set(std::size_t i, std::size_t j, Count v) { m_[i * cod_.size() + j] = v; }
    Count operator()(const std::string& x, const std::string& y) const;
    void set(const std::string& x, const std::string& y, Count v);

    bool has_input(const std::string& x) const;
    bool has_output(const std::string& y) const;
    std::size_t input_index(const std::string& x) const;
    std::size_t output_index(const std::string& y) const;

    /** Same relation with both label lists sorted lexicographically. */
    Multirelation sorted() const;
    bool is_zero() const;

    friend bool operator==(const Multirelation& a, const Multirelation& b);

private:
    LabelSet dom_;
    LabelSet cod_;
    std::vector<Count> m_;
};

using Relation = std::set<std::pair<std::string, std::string>>;

struct Profile {
    std::map<std::string, Count> ar_in;
    std::map<std::string, Count> ar_out;
    std::map<std::string, std::set<std::string>> conn_in;
    std::map<std::string, std::set<std::string>> conn_out;
};

Count checked_add(Count a, Count b);
Count checked_mul(Count a, Count b);

Multirelation compose(const Multirelation& r, const Multirelation& s);
Multirelation coproduct(const Multirelation& r, const Multirelation& s);
Multirelation trace_formula(const Multirelation& r, const std::string& i, const std::string& o);
Profile profile(const Multirelation& r);

Relation support(const Multirelation& r);
Multirelation from_relation(const LabelSet& domain, const LabelSet& codomain, const Relation& rel);
bool pointwise_leq(const Multirelation& a, const Multirelation& b);

/** Renames labels; labels missing from a map keep their name. */
Multirelation relabel(const Multirelation& r,
                      const std::map<std::string, std::string>& in_map,
                      const std::map<std::string, std::string>& out_map);

/** Prefixes every label of a side, as juxtaposition does ("L." / "R."). */
LabelSet tag_labels(const LabelSet& labels, std::string_view tag);

/** The n-communication area: labels "1".."n", entry 1 iff x != y. */
Multirelation comm(std::size_t n);

Multirelation parse_matrix(std::string_view text);
std::string format_matrix(const Multirelation& r);

}  // namespace routenet
