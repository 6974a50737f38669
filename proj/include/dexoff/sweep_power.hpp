#pragma once

// Second-stage sweep: dilation of a slice whose seeds carry individual radii.
//
// The disk swept by a weighted segment splits into a box (the segment moved
// along the row axis while it is in reach) and two disks at its endpoints.
// Boxes are swept with an occlusion rule on their last row; disks are swept
// over the power diagram with weights reach², the distance-like quantity whose
// sign tells whether a point lies in a disk.

#include <cstdint>
#include <functional>
#include <algorithm>
#include <iterator>
#include <limits>
#include <span>
#include <vector>

#include "dexoff/interval.hpp"
#include "dexoff/sweep_voronoi.hpp"
#include "dexoff/vertex.hpp"

namespace dexoff {

using WeightedRowSource = std::function<std::span<const WeightedSegment>(std::size_t)>;

/// Sweep over the box parts. Active pieces are disjoint in depth; where a new
/// box overlaps an active one, the one reaching further along the sweep
/// keeps the overlap. Boxes only ever expire, so no event queue is needed.
class BoxSweep {
  public:
    struct Piece {
        double z_in;
        double z_out;
        std::int64_t last_row;
    };

    void begin_row(std::int64_t row) {
        row_ = row;
        std::erase_if(pieces_, [&](const Piece& p) { return p.last_row < row; });
    }

    void insert(double z_in, double z_out, double reach2) {
        const WeightedSegment s{z_in, z_out, reach2};
        insert_row(std::span<const WeightedSegment>(&s, 1));
    }

    /// Inserts the boxes of a row (sorted, disjoint).
    void insert_row(std::span<const WeightedSegment> segs) {
        detail::require_row_order(segs);
        incoming_.clear();
        for (const WeightedSegment& s : segs) {
            const std::int64_t k = isqrt_floor(s.reach2);
            if (k >= 0 && s.z_out > s.z_in) incoming_.push_back({s.z_in, s.z_out, row_ + k});
        }
        if (incoming_.empty()) return;
        merged_.clear();
        auto emit = [&](double lo, double hi, std::int64_t last) {
            if (!(hi > lo)) return;
            if (!merged_.empty() && merged_.back().z_out == lo && merged_.back().last_row == last)
                merged_.back().z_out = hi;
            else
                merged_.push_back({lo, hi, last});
        };
        // Walk the elementary ranges of both disjoint lists.
        const double inf = std::numeric_limits<double>::infinity();
        std::size_t ia = 0, ib = 0;
        double cursor = -inf;
        while (ia < pieces_.size() || ib < incoming_.size()) {
            const Piece* a = ia < pieces_.size() ? &pieces_[ia] : nullptr;
            const Piece* b = ib < incoming_.size() ? &incoming_[ib] : nullptr;
            const double a_lo = a ? std::max(a->z_in, cursor) : inf;
            const double b_lo = b ? std::max(b->z_in, cursor) : inf;
            const double lo = std::min(a_lo, b_lo);
            const bool in_a = a && a_lo <= lo, in_b = b && b_lo <= lo;
            double hi;
            std::int64_t last;
            if (in_a && in_b) {
                hi = std::min(a->z_out, b->z_out);
                last = std::max(a->last_row, b->last_row);
            } else if (in_a) {
                hi = std::min(a->z_out, b_lo);
                last = a->last_row;
            } else {
                hi = std::min(b->z_out, a_lo);
                last = b->last_row;
            }
            emit(lo, hi, last);
            cursor = hi;
            if (a && a->z_out <= cursor) ++ia;
            if (b && b->z_out <= cursor) ++ib;
        }
        pieces_.swap(merged_);
        max_size_ = std::max(max_size_, pieces_.size());
    }

    /// Appends the union of the active boxes; touching pieces come out fused,
    /// so the appended run is sorted and disjoint.
    void emit(std::vector<Interval>& out) const {
        const std::size_t first = out.size();
        for (const Piece& p : pieces_) {
            if (out.size() > first && out.back().z_out == p.z_in)
                out.back().z_out = p.z_out;
            else
                out.push_back({p.z_in, p.z_out});
        }
        emitted_ += pieces_.size();
    }

    std::size_t size() const { return pieces_.size(); }
    std::size_t max_size() const { return max_size_; }
    std::size_t emitted() const { return emitted_; }

  private:
    std::int64_t row_ = 0;
    std::vector<Piece> pieces_, incoming_, merged_;
    std::size_t max_size_ = 0;
    mutable std::size_t emitted_ = 0;
};

/// Half-space power-diagram sweep over disk seeds. A disk leaves the active
/// set when it falls out of reach, or at the closing vertex of its power cell
/// against its two depth neighbours, past which the neighbours cover it.
class PointPowerSweep {
  public:
    struct Node {
        double z;
        double zd;  // z in dexel units
        std::int64_t row;
        double reach2;
        std::int64_t last_row;
        std::uint32_t id;
    };

    /// A disk to insert: centre depth and reach² in dexel units².
    struct Disk {
        double z;
        double reach2;
    };

    explicit PointPowerSweep(double spacing) : spacing_(spacing) {}

    void begin_row(std::int64_t row) {
        row_ = row;
        while (!events_.empty() && events_.top().fire_after < double(row)) {
            const SweepEvent ev = events_.top();
            events_.pop();
            if (!list_.alive(ev.target) || !same_neighbours(ev)) continue;
            erase(ev.target);
        }
        for (const Node& n : list_.items())
            if (n.last_row < row && list_.alive(n.id)) erase(n.id);
        settle();
    }

    void insert(double z, double reach2) {
        const Disk d{z, reach2};
        insert_row(std::span<const Disk>(&d, 1));
    }

    /// Inserts the disks of the current row, sorted by depth. Of coincident
    /// centres only the widest is kept.
    void insert_row(std::span<const Disk> disks) {
        fresh_.clear();
        incoming_.clear();
        for (std::size_t k = 0; k < disks.size(); ++k) {
            const Disk& d = disks[k];
            if (k > 0 && d.z < disks[k - 1].z) throw InvalidInput("power sweep: disks must be sorted by depth");
            const std::int64_t reach = isqrt_floor(d.reach2);
            if (reach < 0) continue;
            if (!incoming_.empty() && incoming_.back().z == d.z) {
                Node& prev = incoming_.back();
                if (d.reach2 > prev.reach2) {
                    prev.reach2 = d.reach2;
                    prev.last_row = row_ + reach;
                }
                continue;
            }
            incoming_.push_back({d.z, d.z / spacing_, row_, d.reach2, row_ + reach, 0});
        }
        if (incoming_.empty()) return;
        for (Node& n : incoming_) {
            n.id = list_.new_id();
            fresh_.push_back(n.id);
        }
        list_.compact();
        merged_.clear();
        std::merge(list_.items().begin(), list_.items().end(), incoming_.begin(), incoming_.end(),
                   std::back_inserter(merged_), [](const Node& a, const Node& b) { return a.z < b.z; });
        list_.assign(merged_);
        max_size_ = std::max(max_size_, list_.size());
        for (std::uint32_t id : fresh_) {
            const std::int64_t k = list_.index(id);
            pending_.push_back(id);
            if (const std::int64_t l = list_.prev_live(k); l != list_.none) pending_.push_back(list_.at(l).id);
            if (const std::int64_t r = list_.next_live(k); r != list_.none) pending_.push_back(list_.at(r).id);
        }
        std::sort(pending_.begin(), pending_.end());
        pending_.erase(std::unique(pending_.begin(), pending_.end()), pending_.end());
        settle();
    }

    bool remove(std::uint32_t id) {
        if (!list_.alive(id)) return false;
        erase(id);
        settle();
        return true;
    }

    void emit(std::vector<Interval>& out) const { emit_outside(out, {}); }

    /// Appends the disks' cross-sections, skipping those inside `cover`
    /// (sorted, disjoint), which the caller emits anyway.
    void emit_outside(std::vector<Interval>& out, std::span<const Interval> cover) const {
        std::size_t k = 0;
        for (const Node& n : list_.items()) {
            const double d = double(row_ - n.row);
            const double h2 = n.reach2 - d * d;
            if (h2 < 0.0) continue;
            const double h = spacing_ * std::sqrt(h2);
            const Interval iv{n.z - h, n.z + h};
            while (k < cover.size() && cover[k].z_out < n.z) ++k;
            if (k < cover.size() && cover[k].z_in <= iv.z_in && iv.z_out <= cover[k].z_out) continue;
            out.push_back(iv);
        }
        emitted_ += list_.size();
    }

    /// Active disks as (row, depth in dexels, radius in dexels).
    std::vector<WeightedPoint> active() const {
        std::vector<WeightedPoint> out;
        for (const Node& n : list_.items()) out.push_back({double(n.row), n.zd, std::sqrt(n.reach2)});
        return out;
    }

    std::size_t size() const { return list_.size(); }
    std::size_t max_size() const { return max_size_; }
    std::size_t emitted() const { return emitted_; }

  private:
    void push_event(SweepEvent ev) {
        ev.seq = seq_++;
        events_.push(ev);
    }

    void erase(std::uint32_t id) {
        const std::int64_t k = list_.index(id);
        const std::int64_t l = list_.prev_live(k), r = list_.next_live(k);
        if (l != list_.none) pending_.push_back(list_.at(l).id);
        if (r != list_.none) pending_.push_back(list_.at(r).id);
        list_.kill(id);
    }

    bool same_neighbours(const SweepEvent& ev) const {
        const std::int64_t k = list_.index(ev.target);
        const std::int64_t l = list_.prev_live(k), r = list_.next_live(k);
        if (l == list_.none || r == list_.none) return false;
        return list_.at(l).id == ev.left && list_.at(r).id == ev.right;
    }

    void settle() {
        while (!pending_.empty()) {
            const std::uint32_t id = pending_.back();
            pending_.pop_back();
            if (list_.alive(id)) check_triple(id);
        }
        list_.compact();
    }

    static detail::PowerSite site(const Node& n) { return {double(n.row), n.zd, n.reach2}; }

    void check_triple(std::uint32_t id) {
        const std::int64_t k = list_.index(id);
        const std::int64_t l = list_.prev_live(k), r = list_.next_live(k);
        if (l == list_.none || r == list_.none) return;
        const Node& a = list_.at(l);
        const Node& b = list_.at(k);
        const Node& c = list_.at(r);
        const RowRange rows = detail::power_cell_rows(site(a), site(b), site(c));
        if (rows.empty() || rows.hi < double(row_)) {
            erase(b.id);
            return;
        }
        if (rows.hi < double(b.last_row)) push_event({rows.hi, b.id, a.id, c.id, 0});
    }

    double spacing_;
    std::int64_t row_ = 0;
    detail::ActiveList<Node> list_;
    detail::EventQueue events_;
    std::uint64_t seq_ = 0;
    std::vector<std::uint32_t> pending_, fresh_;
    std::vector<Node> incoming_, merged_;
    std::size_t max_size_ = 0;
    mutable std::size_t emitted_ = 0;
};

/// One directional pass of the weighted dilation: boxes and endpoint disks of
/// every seed at or behind each row.
inline std::vector<DexelColumn> half_power_dilate(std::size_t nrows, const WeightedRowSource& rows, double spacing,
                                                  SweepDirection dir, RowWindow win = {}, double eps = 0.0,
                                                  SweepStats* stats = nullptr) {
    win = win.clamped(nrows);
    BoxSweep boxes;
    PointPowerSweep disks(spacing);
    std::vector<PointPowerSweep::Disk> ends;
    std::vector<Interval> cover;
    std::vector<DexelColumn> out(win.size());
    detail::drive_rows(nrows, dir, win, [&](std::size_t t, std::size_t r) {
        boxes.begin_row(std::int64_t(t));
        disks.begin_row(std::int64_t(t));
        const auto segs = rows(r);
        if (!segs.empty()) {
            boxes.insert_row(segs);
            ends.clear();
            for (const WeightedSegment& s : segs) {
                ends.push_back({s.z_in, s.reach2});
                ends.push_back({s.z_out, s.reach2});
            }
            disks.insert_row(ends);
        }
        if (!win.contains(r) || (boxes.size() == 0 && disks.size() == 0)) return;
        DexelColumn& col = out[r - win.begin];
        cover.clear();
        boxes.emit(cover);
        col = cover;
        disks.emit_outside(col, cover);
        normalize_in_place(col, eps);
    });
    if (stats) {
        stats->max_active = boxes.max_size() + disks.max_size();
        stats->emitted = boxes.emitted() + disks.emitted();
    }
    return out;
}

/// Dilation of a slice of weighted segments: each segment grows by its own
/// radius. Output covers the rows of `win`.
inline std::vector<DexelColumn> power_dilate_2d(std::size_t nrows, const WeightedRowSource& rows, double spacing,
                                                RowWindow win = {}, double eps = 0.0) {
    auto fwd = half_power_dilate(nrows, rows, spacing, SweepDirection::Forward, win, eps);
    auto bwd = half_power_dilate(nrows, rows, spacing, SweepDirection::Backward, win, eps);
    for (std::size_t r = 0; r < fwd.size(); ++r) {
        if (bwd[r].empty()) continue;
        fwd[r].insert(fwd[r].end(), bwd[r].begin(), bwd[r].end());
        normalize_in_place(fwd[r], eps);
    }
    return fwd;
}

inline std::vector<DexelColumn> power_dilate_2d(std::span<const WeightedColumn> rows, double spacing,
                                                double eps = 0.0) {
    WeightedRowSource src = [&](std::size_t r) { return std::span<const WeightedSegment>(rows[r]); };
    return power_dilate_2d(rows.size(), src, spacing, {}, eps);
}

}  // namespace dexoff
