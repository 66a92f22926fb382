#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "percolab/error.hpp"

namespace percolab {

// Tuple sizes for the half-edge model. The regular case has every size equal
// to d; general sequences (sizes in [1, d]) appear when exploring the graph
// left over after removing a component.
class DegreeSequence {
public:
    DegreeSequence(std::vector<std::uint16_t> sizes, int d) : sizes_(std::move(sizes)), d_(d) {
        if (sizes_.empty()) throw Error(ErrorCode::invalid_input, "degree sequence must be non-empty");
        if (d_ < 1) throw Error(ErrorCode::invalid_input, "maximum tuple size must be >= 1");
        std::uint64_t total = 0;
        for (auto s : sizes_) {
            if (s < 1 || s > d_) throw Error(ErrorCode::invalid_input, "tuple size out of [1, d]");
            total += s;
        }
        if (total % 2 != 0) throw Error(ErrorCode::invalid_input, "sum of tuple sizes must be even");
        half_edges_ = total;
        regular_ = true;
        for (auto s : sizes_) {
            if (s != sizes_.front()) { regular_ = false; break; }
        }
        regular_ = regular_ && sizes_.front() == d_;
        offsets_.resize(sizes_.size() + 1);
        offsets_[0] = 0;
        for (std::size_t i = 0; i < sizes_.size(); ++i) offsets_[i + 1] = offsets_[i] + sizes_[i];
    }

    static DegreeSequence regular(std::uint64_t n, int d) {
        if (n == 0) throw Error(ErrorCode::invalid_input, "need at least one tuple");
        if (n * static_cast<std::uint64_t>(d) % 2 != 0)
            throw Error(ErrorCode::invalid_input, "n*d must be even");
        return DegreeSequence(std::vector<std::uint16_t>(n, static_cast<std::uint16_t>(d)), d);
    }

    std::uint64_t tuple_count() const { return sizes_.size(); }
    std::uint64_t half_edge_count() const { return half_edges_; }
    int max_size() const { return d_; }
    bool is_regular() const { return regular_; }
    std::uint16_t size_of(std::uint64_t tuple) const { return sizes_[tuple]; }
    std::uint64_t offset_of(std::uint64_t tuple) const { return offsets_[tuple]; }
    const std::vector<std::uint16_t>& sizes() const { return sizes_; }

    // Tuple owning a half-edge index.
    std::uint64_t owner(std::uint64_t half_edge) const {
        if (regular_) return half_edge / static_cast<std::uint64_t>(d_);
        // binary search over offsets
        std::uint64_t lo = 0, hi = sizes_.size();
        while (hi - lo > 1) {
            std::uint64_t mid = (lo + hi) / 2;
            if (offsets_[mid] <= half_edge) lo = mid; else hi = mid;
        }
        return lo;
    }

private:
    std::vector<std::uint16_t> sizes_;
    std::vector<std::uint64_t> offsets_;
    std::uint64_t half_edges_ = 0;
    int d_ = 0;
    bool regular_ = false;
};

}  // namespace percolab
