#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "cstar/errors.hpp"

namespace cstar {

/// Multiplication table of a finite group, with elements indexed 0..n-1.
///
/// The constructor validates the table: every row and column must be a
/// permutation, a two-sided identity must exist, and associativity is checked
/// exhaustively for orders up to 64.
class GroupTable {
public:
    GroupTable(int order, std::vector<int> table) : n_(order), table_(std::move(table)) {
        validate();
    }

    /// Cyclic group Z/n with op(g, h) = (g + h) mod n.
    static GroupTable cyclic(int n) {
        if (n < 1) throw InvalidArgument("cyclic group order must be >= 1");
        std::vector<int> t(static_cast<size_t>(n) * n);
        for (int g = 0; g < n; ++g)
            for (int h = 0; h < n; ++h) t[static_cast<size_t>(g) * n + h] = (g + h) % n;
        return GroupTable(n, std::move(t));
    }

    /// Symmetric group S_3: the six permutations of {0,1,2} in lexicographic
    /// order of their one-line notation, composed as (p*q)(i) = p(q(i)).
    static GroupTable symmetric3() {
        std::array<std::array<int, 3>, 6> perms{};
        std::array<int, 3> p{0, 1, 2};
        int idx = 0;
        do {
            perms[idx++] = {p[0], p[1], p[2]};
        } while (std::next_permutation(p.begin(), p.end()));

        auto find = [&](const std::array<int, 3>& q) {
            for (int i = 0; i < 6; ++i)
                if (perms[i] == q) return i;
            throw InvalidArgument("S3 composition table construction failed");
        };
        std::vector<int> t(36);
        for (int g = 0; g < 6; ++g)
            for (int h = 0; h < 6; ++h) {
                std::array<int, 3> comp{};
                for (int i = 0; i < 3; ++i) comp[i] = perms[g][perms[h][i]];
                t[static_cast<size_t>(g) * 6 + h] = find(comp);
            }
        return GroupTable(6, std::move(t));
    }

    int order() const { return n_; }
    int op(int g, int h) const { return table_[static_cast<size_t>(g) * n_ + h]; }
    int identity() const { return identity_; }
    int inverse(int g) const { return inverse_[static_cast<size_t>(g)]; }
    const std::vector<int>& table() const { return table_; }

    bool is_abelian() const {
        for (int g = 0; g < n_; ++g)
            for (int h = 0; h < g; ++h)
                if (op(g, h) != op(h, g)) return false;
        return true;
    }

    bool operator==(const GroupTable& other) const {
        return n_ == other.n_ && table_ == other.table_;
    }

private:
    void validate() {
        if (n_ < 1) throw InvalidArgument("group order must be >= 1");
        if (table_.size() != static_cast<size_t>(n_) * n_)
            throw InvalidArgument("group table must have order^2 entries");
        for (int v : table_)
            if (v < 0 || v >= n_) throw InvalidArgument("group table entry out of range");

        // Latin square: each row and column hits every element once.
        std::vector<bool> seen(static_cast<size_t>(n_));
        for (int g = 0; g < n_; ++g) {
            std::fill(seen.begin(), seen.end(), false);
            for (int h = 0; h < n_; ++h) seen[static_cast<size_t>(op(g, h))] = true;
            if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
                throw InvalidArgument("group table row " + std::to_string(g) +
                                      " is not a permutation");
        }
        for (int h = 0; h < n_; ++h) {
            std::fill(seen.begin(), seen.end(), false);
            for (int g = 0; g < n_; ++g) seen[static_cast<size_t>(op(g, h))] = true;
            if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
                throw InvalidArgument("group table column " + std::to_string(h) +
                                      " is not a permutation");
        }

        identity_ = -1;
        for (int e = 0; e < n_; ++e) {
            bool ok = true;
            for (int g = 0; g < n_ && ok; ++g) ok = op(e, g) == g && op(g, e) == g;
            if (ok) {
                identity_ = e;
                break;
            }
        }
        if (identity_ < 0) throw InvalidArgument("group table has no two-sided identity");

        // Exhaustive associativity check, O(n^3); skipped beyond order 64.
        if (n_ <= 64) {
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b)
                    for (int c = 0; c < n_; ++c)
                        if (op(op(a, b), c) != op(a, op(b, c)))
                            throw InvalidArgument("group table is not associative");
        }

        inverse_.assign(static_cast<size_t>(n_), -1);
        for (int g = 0; g < n_; ++g) {
            for (int h = 0; h < n_; ++h) {
                if (op(g, h) == identity_ && op(h, g) == identity_) {
                    inverse_[static_cast<size_t>(g)] = h;
                    break;
                }
            }
            if (inverse_[static_cast<size_t>(g)] < 0)
                throw InvalidArgument("group element " + std::to_string(g) + " has no inverse");
        }
    }

    int n_;
    std::vector<int> table_;
    int identity_ = 0;
    std::vector<int> inverse_;
};

}  // namespace cstar
