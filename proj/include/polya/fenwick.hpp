// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

namespace polya {

/// Binary indexed tree over n slots: point updates and cumulative-weight
/// search, both O(log n).
template <typename T>
class FenwickTree {
public:
    explicit FenwickTree(int n) : n_(n), tree_(static_cast<std::size_t>(n) + 1, T{}) {
        while ((mask_ << 1) <= n_) mask_ <<= 1;
    }

    void add(int slot, T delta) {
        for (int i = slot + 1; i <= n_; i += i & -i)
            tree_[static_cast<std::size_t>(i)] += delta;
    }

    /// Sum of slots [0, slot].
    T prefix(int slot) const {
        T sum = T{};
        for (int i = slot + 1; i > 0; i -= i & -i)
            sum += tree_[static_cast<std::size_t>(i)];
        return sum;
    }

    T total() const { return prefix(n_ - 1); }

    /// Smallest slot whose cumulative weight exceeds x; the last slot when
    /// x falls at or past the total (float round-off at the top edge).
    int upper_bound(T x) const {
        int pos = 0;
        T rest = x;
        for (int step = mask_; step > 0; step >>= 1) {
            const int next = pos + step;
            if (next <= n_ && tree_[static_cast<std::size_t>(next)] <= rest) {
                pos = next;
                rest -= tree_[static_cast<std::size_t>(next)];
            }
        }
        return pos < n_ ? pos : n_ - 1;
    }

    int size() const { return n_; }

private:
    int n_;
    int mask_ = 1;
    std::vector<T> tree_;
};

}  // namespace polya
