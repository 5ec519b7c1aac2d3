#include "ncbcast/gf3.hpp"

#include <algorithm>

namespace ncbcast {

CoeffVector CoeffVector::unit(PacketId p, Gf3 c) {
    CoeffVector v;
    if (!c.is_zero()) v.terms_.push_back({p, c});
    return v;
}

Gf3 CoeffVector::coeff(PacketId p) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                               [](const Term& t, PacketId q) { return t.first < q; });
    if (it != terms_.end() && it->first == p) return it->second;
    return Gf3(0);
}

void CoeffVector::set(PacketId p, Gf3 c) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                               [](const Term& t, PacketId q) { return t.first < q; });
    bool present = it != terms_.end() && it->first == p;
    if (c.is_zero()) {
        if (present) terms_.erase(it);
    } else if (present) {
        it->second = c;
    } else {
        terms_.insert(it, {p, c});
    }
}

PacketId CoeffVector::leading() const {
    if (terms_.empty()) throw std::logic_error("coeff vector: leading() on zero vector");
    return terms_.front().first;
}

Gf3 CoeffVector::leading_coeff() const {
    if (terms_.empty()) throw std::logic_error("coeff vector: leading_coeff() on zero vector");
    return terms_.front().second;
}

void CoeffVector::scale(Gf3 a) {
    if (a.is_zero()) {
        terms_.clear();
        return;
    }
    for (auto& t : terms_) t.second = t.second * a;
}

void CoeffVector::add_scaled(Gf3 a, const CoeffVector& x) {
    if (a.is_zero() || x.terms_.empty()) return;
    std::vector<Term> out;
    out.reserve(terms_.size() + x.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < x.terms_.size()) {
        if (j == x.terms_.size() ||
            (i < terms_.size() && terms_[i].first < x.terms_[j].first)) {
            out.push_back(terms_[i++]);
        } else if (i == terms_.size() || x.terms_[j].first < terms_[i].first) {
            Gf3 c = a * x.terms_[j].second;
            if (!c.is_zero()) out.push_back({x.terms_[j].first, c});
            ++j;
        } else {
            Gf3 c = terms_[i].second + a * x.terms_[j].second;
            if (!c.is_zero()) out.push_back({terms_[i].first, c});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
}

std::vector<PacketId> CoeffVector::support() const {
    std::vector<PacketId> s;
    s.reserve(terms_.size());
    for (const auto& t : terms_) s.push_back(t.first);
    return s;
}

bool operator<(const CoeffVector& a, const CoeffVector& b) {
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
        [](const CoeffVector::Term& s, const CoeffVector::Term& t) {
            if (s.first != t.first) return s.first < t.first;
            return s.second.v < t.second.v;
        });
}

CoeffVector KnowledgeBasis::reduce(CoeffVector v) const {
    // Eliminate entries at pivot columns, front to back. A subtraction cancels
    // the current entry exactly (rows have leading coefficient 1) and can only
    // touch columns above it, so earlier positions stay settled.
    std::size_t i = 0;
    while (i < v.terms().size()) {
        PacketId col = v.terms()[i].first;
        Gf3 c = v.terms()[i].second;
        auto it = rows_.find(col);
        if (it == rows_.end()) {
            ++i;
            continue;
        }
        v.add_scaled(c.neg(), it->second);
    }
    return v;
}

void KnowledgeBasis::register_tail(PacketId pivot, const CoeffVector& row) {
    for (const auto& t : row.terms()) {
        if (t.first == pivot) continue;
        auto& us = users_[t.first];
        if (std::find(us.begin(), us.end(), pivot) == us.end()) us.push_back(pivot);
    }
}

void KnowledgeBasis::unregister_tail(PacketId pivot, const CoeffVector& row, PacketId skip) {
    for (const auto& t : row.terms()) {
        if (t.first == pivot || t.first == skip) continue;
        auto it = users_.find(t.first);
        if (it == users_.end()) continue;
        auto pos = std::find(it->second.begin(), it->second.end(), pivot);
        if (pos != it->second.end()) it->second.erase(pos);
        if (it->second.empty()) users_.erase(it);
    }
}

KnowledgeBasis::InsertResult KnowledgeBasis::insert(const CoeffVector& v) {
    CoeffVector r = reduce(v);
    if (r.zero()) return {};

    r.scale(r.leading_coeff().inv());
    PacketId p = r.leading();

    InsertResult out;
    out.grew = true;

    // Back-substitute the new pivot column out of the rows that carry it.
    std::vector<PacketId> carriers;
    if (auto it = users_.find(p); it != users_.end()) {
        carriers = std::move(it->second);
        users_.erase(it);
    }
    for (PacketId q : carriers) {
        CoeffVector& row = rows_.at(q);
        Gf3 c = row.coeff(p);
        unregister_tail(q, row, p);
        row.add_scaled(c.neg(), r);
        register_tail(q, row);
        if (row.support_size() == 1) {
            decoded_.insert(q);
            mixed_.erase(q);
            out.newly_decoded.push_back(q);
        }
    }

    rows_[p] = r;
    const CoeffVector& nr = rows_.at(p);
    register_tail(p, nr);
    for (const auto& t : nr.terms()) {
        if (t.first != p) mixed_.insert(t.first);  // tail columns are heard, unseen
    }
    if (nr.support_size() == 1) {
        decoded_.insert(p);
        mixed_.erase(p);
        out.newly_decoded.push_back(p);
    } else {
        mixed_.insert(p);
    }

    std::sort(out.newly_decoded.begin(), out.newly_decoded.end());
    return out;
}

std::vector<CoeffVector> KnowledgeBasis::rows() const {
    std::vector<CoeffVector> out;
    out.reserve(rows_.size());
    for (const auto& kv : rows_) out.push_back(kv.second);
    return out;
}

std::set<PacketId> KnowledgeBasis::seen_set() const {
    std::set<PacketId> s;
    for (const auto& kv : rows_) s.insert(kv.first);
    return s;
}

std::set<PacketId> KnowledgeBasis::decoded_set() const {
    return {decoded_.begin(), decoded_.end()};
}

std::set<PacketId> KnowledgeBasis::heard_set() const {
    std::set<PacketId> s = seen_set();
    for (const auto& kv : users_) s.insert(kv.first);
    return s;
}

}  // namespace ncbcast
