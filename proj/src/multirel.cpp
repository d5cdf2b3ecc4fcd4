// SPDX-License-Identifier: Apache-2.0
#include "routenet/multirel.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

#include "routenet/errors.hpp"

namespace routenet {

namespace {

void check_distinct(const LabelSet& labels, const char* side) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw Error(ErrorKind::DomainMismatch, std::string("duplicate ") + side + " label '" + l + "'");
        }
    }
}

bool same_set(const LabelSet& a, const LabelSet& b) {
    if (a.size() != b.size()) return false;
    std::vector<std::string> x(a), y(b);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

}  // namespace

Count checked_add(Count a, Count b) {
    if (a > std::numeric_limits<Count>::max() - b) throw Error(ErrorKind::Overflow, "multiplicity overflow");
    return a + b;
}

Count checked_mul(Count a, Count b) {
    if (a != 0 && b > std::numeric_limits<Count>::max() / a) {
        throw Error(ErrorKind::Overflow, "multiplicity overflow");
    }
    return a * b;
}

Multirelation::Multirelation(LabelSet domain, LabelSet codomain)
    : dom_(std::move(domain)), cod_(std::move(codomain)), m_(dom_.size() * cod_.size(), 0) {
    check_distinct(dom_, "input");
    check_distinct(cod_, "output");
}

Multirelation Multirelation::from_rows(LabelSet domain, LabelSet codomain,
                                       const std::vector<std::vector<Count>>& rows) {
    Multirelation r(std::move(domain), std::move(codomain));
    if (rows.size() != r.rows()) throw Error(ErrorKind::DomainMismatch, "row count does not match inputs");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != r.cols()) throw Error(ErrorKind::DomainMismatch, "row width does not match outputs");
        for (std::size_t j = 0; j < rows[i].size(); ++j) r.set(i, j, rows[i][j]);
    }
    return r;
}

Multirelation Multirelation::identity(const LabelSet& labels) {
    Multirelation r(labels, labels);
    for (std::size_t i = 0; i < labels.size(); ++i) r.set(i, i, 1);
    return r;
}

bool Multirelation::has_input(const std::string& x) const {
    return std::find(dom_.begin(), dom_.end(), x) != dom_.end();
}

bool Multirelation::has_output(const std::string& y) const {
    return std::find(cod_.begin(), cod_.end(), y) != cod_.end();
}

std::size_t Multirelation::input_index(const std::string& x) const {
    auto it = std::find(dom_.begin(), dom_.end(), x);
    if (it == dom_.end()) throw Error(ErrorKind::UnknownLabel, "unknown input label '" + x + "'");
    return static_cast<std::size_t>(it - dom_.begin());
}

std::size_t Multirelation::output_index(const std::string& y) const {
    auto it = std::find(cod_.begin(), cod_.end(), y);
    if (it == cod_.end()) throw Error(ErrorKind::UnknownLabel, "unknown output label '" + y + "'");
    return static_cast<std::size_t>(it - cod_.begin());
}

Count Multirelation::operator()(const std::string& x, const std::string& y) const {
    return at(input_index(x), output_index(y));
}

void Multirelation::set(const std::string& x, const std::string& y, Count v) {
    set(input_index(x), output_index(y), v);
}

Multirelation Multirelation::sorted() const {
    LabelSet d(dom_), c(cod_);
    std::sort(d.begin(), d.end());
    std::sort(c.begin(), c.end());
    Multirelation r(d, c);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) r.set(i, j, (*this)(d[i], c[j]));
    }
    return r;
}

bool Multirelation::is_zero() const {
    return std::all_of(m_.begin(), m_.end(), [](Count v) { return v == 0; });
}

bool operator==(const Multirelation& a, const Multirelation& b) {
    if (!same_set(a.dom_, b.dom_) || !same_set(a.cod_, b.cod_)) return false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::size_t bi = b.input_index(a.dom_[i]);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a.at(i, j) != b.at(bi, b.output_index(a.cod_[j]))) return false;
        }
    }
    return true;
}

Multirelation compose(const Multirelation& r, const Multirelation& s) {
    if (!same_set(r.codomain(), s.domain())) {
        throw Error(ErrorKind::DomainMismatch, "compose: codomain of the first does not match domain of the second");
    }
    std::vector<std::size_t> link(r.cols());
    for (std::size_t j = 0; j < r.cols(); ++j) link[j] = s.input_index(r.codomain()[j]);
    Multirelation out(r.domain(), s.codomain());
    for (std::size_t x = 0; x < r.rows(); ++x) {
        for (std::size_t z = 0; z < s.cols(); ++z) {
            Count acc = 0;
            for (std::size_t y = 0; y < r.cols(); ++y) {
                acc = checked_add(acc, checked_mul(r.at(x, y), s.at(link[y], z)));
            }
            out.set(x, z, acc);
        }
    }
    return out;
}

LabelSet tag_labels(const LabelSet& labels, std::string_view tag) {
    LabelSet out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(std::string(tag) + l);
    return out;
}

Multirelation coproduct(const Multirelation& r, const Multirelation& s) {
    LabelSet dom = tag_labels(r.domain(), "L.");
    LabelSet cod = tag_labels(r.codomain(), "L.");
    for (auto& l : tag_labels(s.domain(), "R.")) dom.push_back(l);
    for (auto& l : tag_labels(s.codomain(), "R.")) cod.push_back(l);
    Multirelation out(dom, cod);
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) out.set(i, j, r.at(i, j));
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) out.set(r.rows() + i, r.cols() + j, s.at(i, j));
    return out;
}

Multirelation trace_formula(const Multirelation& r, const std::string& i, const std::string& o) {
    std::size_t ii = r.input_index(i);
    std::size_t oo = r.output_index(o);
    if (r.at(ii, oo) != 0) throw Error(ErrorKind::CycleRisk, "trace: R(" + i + "," + o + ") is not zero");
    LabelSet dom, cod;
    for (const auto& x : r.domain()) if (x != i) dom.push_back(x);
    for (const auto& y : r.codomain()) if (y != o) cod.push_back(y);
    Multirelation out(dom, cod);
    for (std::size_t x = 0; x < dom.size(); ++x) {
        std::size_t rx = r.input_index(dom[x]);
        for (std::size_t y = 0; y < cod.size(); ++y) {
            std::size_t ry = r.output_index(cod[y]);
            out.set(x, y, checked_add(r.at(rx, ry), checked_mul(r.at(rx, oo), r.at(ii, ry))));
        }
    }
    return out;
}

Profile profile(const Multirelation& r) {
    Profile p;
    for (const auto& x : r.domain()) { p.ar_in[x] = 0; p.conn_in[x]; }
    for (const auto& y : r.codomain()) { p.ar_out[y] = 0; p.conn_out[y]; }
    for (std::size_t i = 0; i < r.rows(); ++i) {
        for (std::size_t j = 0; j < r.cols(); ++j) {
            Count v = r.at(i, j);
            if (v == 0) continue;
            const auto& x = r.domain()[i];
            const auto& y = r.codomain()[j];
            p.ar_in[x] = checked_add(p.ar_in[x], v);
            p.ar_out[y] = checked_add(p.ar_out[y], v);
            p.conn_in[x].insert(y);
            p.conn_out[y].insert(x);
        }
    }
    return p;
}

Relation support(const Multirelation& r) {
    Relation rel;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (r.at(i, j) != 0) rel.emplace(r.domain()[i], r.codomain()[j]);
    return rel;
}

Multirelation from_relation(const LabelSet& domain, const LabelSet& codomain, const Relation& rel) {
    Multirelation r(domain, codomain);
    for (const auto& [x, y] : rel) r.set(x, y, 1);
    return r;
}

bool pointwise_leq(const Multirelation& a, const Multirelation& b) {
    if (!same_set(a.domain(), b.domain()) || !same_set(a.codomain(), b.codomain())) return false;
    for (const auto& x : a.domain())
        for (const auto& y : a.codomain())
            if (a(x, y) > b(x, y)) return false;
    return true;
}

Multirelation relabel(const Multirelation& r,
                      const std::map<std::string, std::string>& in_map,
                      const std::map<std::string, std::string>& out_map) {
    auto rename = [](const LabelSet& ls, const std::map<std::string, std::string>& m) {
        LabelSet out;
        for (const auto& l : ls) {
            auto it = m.find(l);
            out.push_back(it == m.end() ? l : it->second);
        }
        return out;
    };
    Multirelation out(rename(r.domain(), in_map), rename(r.codomain(), out_map));
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) out.set(i, j, r.at(i, j));
    return out;
}

Multirelation comm(std::size_t n) {
    LabelSet labels;
    for (std::size_t k = 1; k <= n; ++k) labels.push_back(std::to_string(k));
    Multirelation r(labels, labels);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.set(i, j, i == j ? 0 : 1);
    return r;
}

namespace {

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;

    bool next(std::string_view& line, std::size_t& start) {
        while (pos < text.size()) {
            start = pos;
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            line = text.substr(pos, end - pos);
            pos = end + 1;
            if (line.find_first_not_of(" \t\r") != std::string_view::npos) return true;
        }
        return false;
    }
};

std::vector<std::pair<std::string_view, std::size_t>> tokens(std::string_view line, std::size_t base) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i), base + i);
        i = j;
    }
    return out;
}

LabelSet header(LineReader& rd, std::string_view key) {
    std::string_view line;
    std::size_t start = rd.text.size();
    if (!rd.next(line, start)) throw ParseError(start, std::string("missing '") + std::string(key) + "' line");
    auto toks = tokens(line, start);
    if (toks.empty() || toks[0].first != key) {
        throw ParseError(start, std::string("expected '") + std::string(key) + "'");
    }
    LabelSet labels;
    std::set<std::string> seen;
    for (std::size_t k = 1; k < toks.size(); ++k) {
        std::string l(toks[k].first);
        if (!seen.insert(l).second) throw ParseError(toks[k].second, "duplicate label '" + l + "'");
        labels.push_back(l);
    }
    return labels;
}

}  // namespace

Multirelation parse_matrix(std::string_view text) {
    LineReader rd{text};
    LabelSet dom = header(rd, "in:");
    LabelSet cod = header(rd, "out:");
    Multirelation r(dom, cod);
    std::string_view line;
    std::size_t start = 0;
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (!rd.next(line, start)) throw ParseError(text.size(), "missing row for input '" + dom[i] + "'");
        auto toks = tokens(line, start);
        if (toks.size() != cod.size()) throw ParseError(start, "row has wrong number of entries");
        for (std::size_t j = 0; j < toks.size(); ++j) {
            Count v = 0;
            auto tok = toks[j].first;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || p != tok.data() + tok.size()) {
                throw ParseError(toks[j].second, "expected a non-negative integer");
            }
            r.set(i, j, v);
        }
    }
    if (rd.next(line, start)) throw ParseError(start, "trailing content");
    return r;
}

std::string format_matrix(const Multirelation& r) {
    Multirelation s = r.sorted();
    std::ostringstream os;
    os << "in:";
    for (const auto& l : s.domain()) os << ' ' << l;
    os << "\nout:";
    for (const auto& l : s.codomain()) os << ' ' << l;
    os << '\n';
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j) os << (j ? " " : "") << s.at(i, j);
        os << '\n';
    }
    return os.str();
}

}  // namespace routenet
