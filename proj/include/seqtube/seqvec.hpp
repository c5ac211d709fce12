/// Sparse arithmetic for finitely supported real vectors indexed by the
/// integers. These stand in for elements of the sequence space l2(Z):
/// every vector the construction produces has finite support.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/container/small_vector.hpp>

namespace seqtube {

using Index = std::int64_t;

struct Entry {
    Index index;
    double value;
};

/// Finitely supported vector, entries kept sorted by strictly increasing
/// index. Exact zeros (and coefficients at or below a caller-supplied drop
/// tolerance) are never stored; the zero vector has an empty entry list.
class SparseVec {
public:
    using Storage = boost::container::small_vector<Entry, 8>;

    SparseVec() = default;

    SparseVec(std::initializer_list<Entry> init) {
        entries_.assign(init.begin(), init.end());
        normalize(0.0);
    }

    static SparseVec basis(Index k) {
        SparseVec v;
        v.entries_.push_back({k, 1.0});
        return v;
    }

    static SparseVec from_entries(Storage entries, double drop_tol = 0.0) {
        SparseVec v;
        v.entries_ = std::move(entries);
        v.normalize(drop_tol);
        return v;
    }

    const Storage& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    double coeff(Index k) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                   [](const Entry& e, Index i) { return e.index < i; });
        if (it != entries_.end() && it->index == k) return it->value;
        return 0.0;
    }

    Index min_index() const { return entries_.front().index; }
    Index max_index() const { return entries_.back().index; }

    /// Index carrying the largest absolute coefficient; 0 for the zero vector.
    Index dominant_index() const {
        Index best = 0;
        double mag = -1.0;
        for (const Entry& e : entries_) {
            double a = std::fabs(e.value);
            if (a > mag) { mag = a; best = e.index; }
        }
        return best;
    }

    SparseVec shifted(Index n) const {
        SparseVec v;
        v.entries_ = entries_;
        for (Entry& e : v.entries_) e.index += n;
        return v;
    }

    /// Removes entries with index strictly below cut whose magnitude is at
    /// most tol; larger entries and everything at or past cut are kept.
    void prune_before(Index cut, double tol) {
        entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                      [cut, tol](const Entry& e) {
                                          return e.index < cut &&
                                                 std::fabs(e.value) <= tol;
                                      }),
                       entries_.end());
    }

    void prune(double drop_tol) {
        entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                      [drop_tol](const Entry& e) {
                                          return std::fabs(e.value) <= drop_tol;
                                      }),
                       entries_.end());
    }

    /// Textual encoding "index:value;index:value;..." with ascending indices.
    /// The zero vector encodes as the empty string.
    std::string encode() const {
        std::string out;
        char buf[64];
        bool first = true;
        for (const Entry& e : entries_) {
            int n = std::snprintf(buf, sizeof buf, "%s%lld:%.17g", first ? "" : ";",
                                  static_cast<long long>(e.index), e.value);
            out.append(buf, static_cast<std::size_t>(n));
            first = false;
        }
        return out;
    }

    static SparseVec parse(std::string_view text) {
        SparseVec v;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t end = text.find(';', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string_view item = text.substr(pos, end - pos);
            std::size_t colon = item.find(':');
            if (colon == std::string_view::npos)
                throw std::invalid_argument("SparseVec::parse: missing ':' in \"" +
                                            std::string(item) + "\"");
            std::string idx(item.substr(0, colon));
            std::string val(item.substr(colon + 1));
            char* idx_end = nullptr;
            char* val_end = nullptr;
            long long k = std::strtoll(idx.c_str(), &idx_end, 10);
            double x = std::strtod(val.c_str(), &val_end);
            if (idx_end == idx.c_str() || *idx_end != '\0' || val_end == val.c_str() ||
                *val_end != '\0')
                throw std::invalid_argument("SparseVec::parse: bad entry \"" +
                                            std::string(item) + "\"");
            v.entries_.push_back({k, x});
            pos = end + 1;
        }
        v.normalize(0.0);
        return v;
    }

private:
    void normalize(double drop_tol) {
        std::sort(entries_.begin(), entries_.end(),
                  [](const Entry& a, const Entry& b) { return a.index < b.index; });
        // merge duplicate indices
        std::size_t out = 0;
        for (std::size_t i = 0; i < entries_.size();) {
            Index k = entries_[i].index;
            double sum = 0.0;
            while (i < entries_.size() && entries_[i].index == k) sum += entries_[i++].value;
            entries_[out++] = {k, sum};
        }
        entries_.resize(out);
        prune(drop_tol);
    }

    Storage entries_;
};

inline double inner(const SparseVec& x, const SparseVec& y) {
    double sum = 0.0;
    auto i = x.entries().begin();
    auto j = y.entries().begin();
    const auto ie = x.entries().end();
    const auto je = y.entries().end();
    while (i != ie && j != je) {
        if (i->index < j->index)
            ++i;
        else if (j->index < i->index)
            ++j;
        else
            sum += i++->value * j++->value;
    }
    return sum;
}

inline double norm(const SparseVec& x) {
    double sum = 0.0;
    for (const Entry& e : x.entries()) sum += e.value * e.value;
    return std::sqrt(sum);
}

/// Linear combination sum_i coeffs[i] * vecs[i], dropping entries whose
/// magnitude ends up at or below drop_tol.
inline SparseVec combine(std::span<const double> coeffs,
                         std::span<const SparseVec* const> vecs, double drop_tol = 0.0) {
    boost::container::small_vector<Entry, 32> pool;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        for (const Entry& e : vecs[i]->entries()) pool.push_back({e.index, coeffs[i] * e.value});
    }
    std::sort(pool.begin(), pool.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    SparseVec::Storage merged;
    for (std::size_t i = 0; i < pool.size();) {
        Index k = pool[i].index;
        double sum = 0.0;
        while (i < pool.size() && pool[i].index == k) sum += pool[i++].value;
        merged.push_back({k, sum});
    }
    return SparseVec::from_entries(std::move(merged), drop_tol);
}

/// a*x + y with drop-tolerance cleanup.
inline SparseVec axpy(double a, const SparseVec& x, const SparseVec& y,
                      double drop_tol = 0.0) {
    const double cs[2] = {a, 1.0};
    const SparseVec* vs[2] = {&x, &y};
    return combine(cs, vs, drop_tol);
}

inline SparseVec scaled(double a, const SparseVec& x) {
    SparseVec::Storage s;
    if (a != 0.0) {
        s = x.entries();
        for (Entry& e : s) e.value *= a;
    }
    return SparseVec::from_entries(std::move(s), 0.0);
}

inline SparseVec shift(Index n, const SparseVec& x) { return x.shifted(n); }

}  // namespace seqtube
