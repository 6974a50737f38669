#pragma once

// Half-space Voronoi sweep over the parallel depth segments of one 2D slice.
//
// Rows are integers (dexel units along the sweep direction); depths are world
// units. A seed inserted at row y only influences rows y' >= y, so after one
// sweep in each direction the union of both half-dilations is the full
// dilation of the slice.
//
// The active set keeps, ordered by depth, the seed pieces whose half-space
// cell may still meet the sweep line. Pieces never overlap: a new seed
// supersedes the depth range it shares with older pieces, because it is at
// least as close to every later row. A piece leaves the set when it falls out
// of reach of the radius (deactivation) or when the cell it owns between its
// two neighbours pinches off at a Voronoi vertex.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "dexoff/interval.hpp"
#include "dexoff/vertex.hpp"

namespace dexoff {

/// A depth segment carrying a squared transfer radius, in dexel units². The
/// row it belongs to is implied by where it is stored.
struct WeightedSegment {
    double z_in = 0.0;
    double z_out = 0.0;
    double reach2 = 0.0;

    double radius() const { return std::sqrt(reach2); }
    friend bool operator==(const WeightedSegment&, const WeightedSegment&) = default;
};

using WeightedColumn = std::vector<WeightedSegment>;

enum class SweepDirection { Forward, Backward };

/// Vertex event: removes `target` before the first row strictly greater than
/// fire_after, provided it still sits between the same two neighbours;
/// otherwise the triple has changed and was re-examined when it did.
/// Seeds falling out of reach are not queued: every row scans the active set
/// anyway, and expiry is checked during that scan.
struct SweepEvent {
    double fire_after = 0.0;
    std::uint32_t target = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint64_t seq = 0;
};

/// Largest integer k >= 0 with k*k <= v.
inline std::int64_t isqrt_floor(double v) {
    if (!(v >= 0.0)) return -1;
    auto k = std::int64_t(std::sqrt(v));
    while (double(k + 1) * double(k + 1) <= v) ++k;
    while (k > 0 && double(k) * double(k) > v) --k;
    return k;
}

namespace detail {

struct EventLater {
    bool operator()(const SweepEvent& a, const SweepEvent& b) const {
        if (a.fire_after != b.fire_after) return a.fire_after > b.fire_after;
        return a.seq > b.seq;
    }
};

using EventQueue = std::priority_queue<SweepEvent, std::vector<SweepEvent>, EventLater>;

/// Depth-ordered active set stored as a vector. Removal only marks an item
/// dead; dead items are skipped by neighbour lookups and dropped by
/// compact(). Each row rebuilds the vector with a single merge, which costs
/// no more than emitting the row.
template <class Item>
class ActiveList {
  public:
    static constexpr std::int64_t none = -1;

    const std::vector<Item>& items() const { return items_; }
    std::size_t size() const { return items_.size() - dead_; }

    std::uint32_t new_id() {
        pos_.push_back(none);
        return std::uint32_t(pos_.size() - 1);
    }

    bool alive(std::uint32_t id) const { return id < pos_.size() && pos_[id] != none; }
    std::int64_t index(std::uint32_t id) const { return pos_[id]; }
    bool live_at(std::int64_t k) const { return pos_[items_[std::size_t(k)].id] != none; }
    const Item& at(std::int64_t k) const { return items_[std::size_t(k)]; }

    std::int64_t prev_live(std::int64_t k) const {
        while (--k >= 0)
            if (live_at(k)) return k;
        return none;
    }

    std::int64_t next_live(std::int64_t k) const {
        while (++k < std::int64_t(items_.size()))
            if (live_at(k)) return k;
        return none;
    }

    void kill(std::uint32_t id) {
        pos_[id] = none;
        ++dead_;
    }

    void compact() {
        if (dead_ == 0) return;
        std::size_t n = 0;
        for (std::size_t k = 0; k < items_.size(); ++k)
            if (pos_[items_[k].id] != none) items_[n++] = items_[k];
        items_.resize(n);
        reindex();
    }

    /// Replaces the contents; items must be live ids in depth order.
    void assign(std::vector<Item>& v) {
        items_.swap(v);
        reindex();
    }

  private:
    void reindex() {
        for (std::size_t k = 0; k < items_.size(); ++k) pos_[items_[k].id] = std::int64_t(k);
        dead_ = 0;
    }

    std::vector<Item> items_;
    std::vector<std::int64_t> pos_;
    std::size_t dead_ = 0;
};

/// Seeds of one row must be sorted and pairwise disjoint.
template <class Seg>
void require_row_order(std::span<const Seg> seeds) {
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        if (!(seeds[k].z_out >= seeds[k].z_in)) throw InvalidInput("sweep: seed with z_out < z_in");
        if (k > 0 && seeds[k].z_in < seeds[k - 1].z_out)
            throw InvalidInput("sweep: seeds of a row must be sorted and disjoint");
    }
}

}  // namespace detail

/// Sweep state for one slice and one direction: the active set plus the event
/// queue.
class SegmentSweep {
  public:
    struct Piece {
        double z_in;
        double z_out;
        std::int64_t row;
        std::uint32_t id;
    };

    /// radius in dexels, spacing converts depths to dexel units for the
    /// geometric predicates.
    SegmentSweep(double radius, double spacing)
        : r2_(radius * radius), reach_(isqrt_floor(radius * radius)), spacing_(spacing) {
        if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidInput("sweep: radius must be finite and >= 0");
    }

    std::int64_t row() const { return row_; }

    /// Moves the sweep line to `row` and fires every pending event due before it.
    void begin_row(std::int64_t row) {
        row_ = row;
        while (!events_.empty() && events_.top().fire_after < double(row)) {
            const SweepEvent ev = events_.top();
            events_.pop();
            if (!list_.alive(ev.target) || !same_neighbours(ev)) continue;
            erase(ev.target);
        }
        for (const Piece& p : list_.items())
            if (p.row + reach_ < row && list_.alive(p.id)) erase(p.id);
        settle();
    }

    /// Inserts a seed lying on the current row. Zero-length seeds are
    /// ignored, as normalization would have dropped them anyway.
    void insert(double z_in, double z_out) {
        const Interval iv{z_in, z_out};
        insert_row(std::span<const Interval>(&iv, 1));
    }

    /// Inserts all seeds of the current row (sorted, disjoint). Each seed
    /// supersedes the depth range it shares with older pieces.
    void insert_row(std::span<const Interval> seeds) {
        detail::require_row_order(seeds);
        list_.compact();
        const auto& old = list_.items();
        fresh_.clear();
        kept_.clear();
        std::size_t s0 = 0;
        for (const Piece& p : old) {
            while (s0 < seeds.size() && seeds[s0].z_out <= p.z_in) ++s0;
            std::size_t k = s0;
            while (k < seeds.size() && !(seeds[k].z_out > seeds[k].z_in)) ++k;
            if (k == seeds.size() || seeds[k].z_in >= p.z_out) {
                kept_.push_back(p);
                continue;
            }
            list_.kill(p.id);
            double cursor = p.z_in;
            for (; k < seeds.size() && seeds[k].z_in < p.z_out; ++k) {
                if (!(seeds[k].z_out > seeds[k].z_in)) continue;
                if (seeds[k].z_in > cursor) kept_.push_back(make(cursor, seeds[k].z_in, p.row));
                cursor = std::max(cursor, seeds[k].z_out);
            }
            if (cursor < p.z_out) kept_.push_back(make(cursor, p.z_out, p.row));
        }
        seeds_.clear();
        for (const Interval& iv : seeds)
            if (iv.z_out > iv.z_in) seeds_.push_back(make(iv.z_in, iv.z_out, row_));
        if (seeds_.empty() && fresh_.empty()) return;

        merged_.clear();
        std::merge(kept_.begin(), kept_.end(), seeds_.begin(), seeds_.end(), std::back_inserter(merged_),
                   [](const Piece& a, const Piece& b) { return a.z_in < b.z_in; });
        list_.assign(merged_);
        max_size_ = std::max(max_size_, list_.size());
        for (std::uint32_t id : fresh_) queue_around(id);
        std::sort(pending_.begin(), pending_.end());
        pending_.erase(std::unique(pending_.begin(), pending_.end()), pending_.end());
        settle();
    }

    /// Removes a live piece; returns false for dead or unknown ids.
    bool remove(std::uint32_t id) {
        if (!list_.alive(id)) return false;
        erase(id);
        settle();
        return true;
    }

    /// Union of the active pieces' cross-sections with the current row.
    void dilate_line(std::vector<Interval>& out) const {
        for (const Piece& p : list_.items()) {
            const double d = double(row_ - p.row);
            const double h2 = r2_ - d * d;
            if (h2 < 0.0) continue;
            const double h = spacing_ * std::sqrt(h2);
            out.push_back({p.z_in - h, p.z_out + h});
        }
        emitted_ += list_.size();
    }

    /// Active pieces, unchanged in depth, tagged with reach² = r² - d².
    void extrude_line(std::vector<WeightedSegment>& out) const {
        for (const Piece& p : list_.items()) {
            const double d = double(row_ - p.row);
            const double h2 = r2_ - d * d;
            if (h2 < 0.0) continue;
            out.push_back({p.z_in, p.z_out, h2});
        }
        emitted_ += list_.size();
    }

    std::vector<SeedSegment> active() const {
        std::vector<SeedSegment> out;
        for (const Piece& p : list_.items()) out.push_back({double(p.row), p.z_in, p.z_out});
        return out;
    }

    std::vector<std::uint32_t> active_ids() const {
        std::vector<std::uint32_t> out;
        for (const Piece& p : list_.items()) out.push_back(p.id);
        return out;
    }

    std::vector<SweepEvent> pending_events() const {
        auto copy = events_;
        std::vector<SweepEvent> out;
        while (!copy.empty()) {
            out.push_back(copy.top());
            copy.pop();
        }
        return out;
    }

    std::size_t size() const { return list_.size(); }
    std::size_t max_size() const { return max_size_; }
    std::size_t emitted() const { return emitted_; }

  private:
    Piece make(double z_in, double z_out, std::int64_t row) {
        const std::uint32_t id = list_.new_id();
        fresh_.push_back(id);
        return {z_in, z_out, row, id};
    }

    void erase(std::uint32_t id) {
        const std::int64_t k = list_.index(id);
        const std::int64_t l = list_.prev_live(k), r = list_.next_live(k);
        if (l != list_.none) pending_.push_back(list_.at(l).id);
        if (r != list_.none) pending_.push_back(list_.at(r).id);
        list_.kill(id);
    }

    void push_event(SweepEvent ev) {
        ev.seq = seq_++;
        events_.push(ev);
    }

    bool same_neighbours(const SweepEvent& ev) const {
        const std::int64_t k = list_.index(ev.target);
        const std::int64_t l = list_.prev_live(k), r = list_.next_live(k);
        if (l == list_.none || r == list_.none) return false;
        return list_.at(l).id == ev.left && list_.at(r).id == ev.right;
    }

    /// A new piece changes the triples centred on itself and on its two
    /// neighbours.
    void queue_around(std::uint32_t id) {
        const std::int64_t k = list_.index(id);
        pending_.push_back(id);
        if (const std::int64_t l = list_.prev_live(k); l != list_.none) pending_.push_back(list_.at(l).id);
        if (const std::int64_t r = list_.next_live(k); r != list_.none) pending_.push_back(list_.at(r).id);
    }

    void settle() {
        while (!pending_.empty()) {
            const std::uint32_t id = pending_.back();
            pending_.pop_back();
            if (list_.alive(id)) check_triple(id);
        }
        list_.compact();
    }

    // ---- geometric predicates, in dexel units ----------------------------

    /// Depth where the row distances to `lo` (below) and `hi` (above) are
    /// equal; `hi` is strictly closer above it. The difference of squared
    /// distances is increasing in z, so the piecewise formula is selected by
    /// evaluating it at the breakpoints.
    double bisector(const Piece& lo, const Piece& hi, double row) const {
        const double p0 = lo.z_in / spacing_, p1 = lo.z_out / spacing_;
        const double q0 = hi.z_in / spacing_, q1 = hi.z_out / spacing_;
        const double dp = row - double(lo.row), dq = row - double(hi.row);
        const double dp2 = dp * dp, dq2 = dq * dq;
        auto f = [&](double z) {
            const double gp = std::max({0.0, p0 - z, z - p1});
            const double gq = std::max({0.0, q0 - z, z - q1});
            return dp2 + gp * gp - dq2 - gq * gq;
        };
        if (f(p0) >= 0.0) return (dq2 - dp2 + q0 * q0 - p0 * p0) / (2 * (q0 - p0));
        if (f(p1) >= 0.0) return q0 - std::sqrt(std::max(0.0, dp2 - dq2));
        if (f(q0) >= 0.0) return (dq2 - dp2 + q0 * q0 - p1 * p1) / (2 * (q0 - p1));
        if (f(q1) >= 0.0) return p1 + std::sqrt(std::max(0.0, dq2 - dp2));
        return (dq2 - dp2 + q1 * q1 - p1 * p1) / (2 * (q1 - p1));
    }

    /// Whether b owns nothing of `row` against its neighbours a and c.
    bool pinched(const Piece& a, const Piece& b, const Piece& c, double row) const {
        return bisector(b, c, row) <= bisector(a, b, row);
    }

    /// Candidate rows from the closed-form vertices of the usual feature
    /// pairings: a's top end, c's bottom end, and b's ends or interior.
    void vertex_candidates(const Piece& a, const Piece& b, const Piece& c, std::vector<double>& rows) const {
        const Point2 pa{double(a.row), a.z_out / spacing_};
        const Point2 pc{double(c.row), c.z_in / spacing_};
        const SeedSegment sb{double(b.row), b.z_in / spacing_, b.z_out / spacing_};
        if (auto v = voronoi_vertex_points(pa, {sb.row, sb.z_in}, pc)) rows.push_back(v->row);
        if (auto v = voronoi_vertex_points(pa, {sb.row, sb.z_out}, pc)) rows.push_back(v->row);
        for (const Point2& v : voronoi_vertices_segment_points(pa, sb, pc)) rows.push_back(v.row);
    }

    void check_triple(std::uint32_t id) {
        const std::int64_t k = list_.index(id);
        const std::int64_t l = list_.prev_live(k), r = list_.next_live(k);
        if (l == list_.none || r == list_.none) return;
        const Piece& a = list_.at(l);
        const Piece& b = list_.at(k);
        const Piece& c = list_.at(r);
        const std::int64_t now = row_;
        const std::int64_t last = b.row + reach_;
        if (pinched(a, b, c, double(now))) {
            erase(b.id);
            return;
        }
        if (last <= now || !pinched(a, b, c, double(last))) return;

        // Once b's cell is pinched off a row it stays off every later row, so
        // the first pinched row is well defined. Try the closed-form vertices
        // first and fall back to bisection on rows.
        std::int64_t first = -1;
        double fire = 0.0;
        candidates_.clear();
        vertex_candidates(a, b, c, candidates_);
        for (double v : candidates_) {
            if (!std::isfinite(v)) continue;
            const auto kr = std::int64_t(std::ceil(v));
            if (kr <= now || kr > last) continue;
            if (pinched(a, b, c, double(kr)) && !pinched(a, b, c, double(kr - 1))) {
                first = kr;
                fire = v;
                break;
            }
        }
        if (first < 0) {
            std::int64_t lo = now, hi = last;  // !pinched(lo), pinched(hi)
            while (hi - lo > 1) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                (pinched(a, b, c, double(mid)) ? hi : lo) = mid;
            }
            first = hi;
            fire = double(hi - 1);
        }
        if (fire >= double(first) || fire < double(first - 1)) fire = double(first - 1);
        push_event({fire, b.id, a.id, c.id, 0});
    }

    double r2_;
    std::int64_t reach_;
    double spacing_;
    std::int64_t row_ = 0;
    detail::ActiveList<Piece> list_;
    detail::EventQueue events_;
    std::uint64_t seq_ = 0;
    std::vector<std::uint32_t> pending_;
    std::vector<std::uint32_t> fresh_;
    std::vector<Piece> kept_, seeds_, merged_;
    std::vector<double> candidates_;
    std::size_t max_size_ = 0;
    mutable std::size_t emitted_ = 0;
};

/// Statistics of one half sweep.
struct SweepStats {
    std::size_t max_active = 0;
    std::size_t emitted = 0;
};

/// Rows [begin, end) for which a sweep produces output. Rows outside still
/// feed the sweep with seeds.
struct RowWindow {
    std::size_t begin = 0;
    std::size_t end = std::numeric_limits<std::size_t>::max();

    RowWindow clamped(std::size_t nrows) const { return {std::min(begin, nrows), std::min(end, nrows)}; }
    std::size_t size() const { return end > begin ? end - begin : 0; }
    bool contains(std::size_t r) const { return r >= begin && r < end; }
};

/// Row accessor: returns the normalized input column of row r.
using RowSource = std::function<std::span<const Interval>(std::size_t)>;

namespace detail {

/// Drives a sweep over rows in `dir` order, stopping once the window has
/// been passed. `step(t, r)` processes sweep step t on input row r and
/// returns whether anything is active.
template <class Step>
void drive_rows(std::size_t nrows, SweepDirection dir, const RowWindow& win, Step&& step) {
    for (std::size_t t = 0; t < nrows; ++t) {
        const std::size_t r = dir == SweepDirection::Forward ? t : nrows - 1 - t;
        if (dir == SweepDirection::Forward ? r >= win.end : r < win.begin) break;
        step(t, r);
    }
}

}  // namespace detail

/// Half-dilation of a slice of `nrows` rows. Output row r (relative to the
/// window) holds the union of the cross-sections of every seed at or behind
/// r in sweep order.
inline std::vector<DexelColumn> half_sweep_dilate(std::size_t nrows, const RowSource& rows, double radius,
                                                  double spacing, SweepDirection dir, RowWindow win = {},
                                                  double eps = 0.0, SweepStats* stats = nullptr) {
    win = win.clamped(nrows);
    SegmentSweep sweep(radius, spacing);
    std::vector<DexelColumn> out(win.size());
    detail::drive_rows(nrows, dir, win, [&](std::size_t t, std::size_t r) {
        sweep.begin_row(std::int64_t(t));
        sweep.insert_row(rows(r));
        if (sweep.size() == 0 || !win.contains(r)) return;
        DexelColumn& col = out[r - win.begin];
        sweep.dilate_line(col);
        normalize_in_place(col, eps);
    });
    if (stats) *stats = {sweep.max_size(), sweep.emitted()};
    return out;
}

/// Half-extrusion: output row r holds the active pieces with their transfer
/// reach².
inline std::vector<WeightedColumn> half_sweep_extrude(std::size_t nrows, const RowSource& rows, double radius,
                                                      double spacing, SweepDirection dir, RowWindow win = {},
                                                      SweepStats* stats = nullptr) {
    win = win.clamped(nrows);
    SegmentSweep sweep(radius, spacing);
    std::vector<WeightedColumn> out(win.size());
    detail::drive_rows(nrows, dir, win, [&](std::size_t t, std::size_t r) {
        sweep.begin_row(std::int64_t(t));
        sweep.insert_row(rows(r));
        if (sweep.size() == 0 || !win.contains(r)) return;
        sweep.extrude_line(out[r - win.begin]);
    });
    if (stats) *stats = {sweep.max_size(), sweep.emitted()};
    return out;
}

/// Combines two depth-sorted, internally disjoint weighted columns; where they
/// overlap the larger reach wins. Touching pieces of equal reach are fused.
inline WeightedColumn merge_max_reach(std::span<const WeightedSegment> a, std::span<const WeightedSegment> b) {
    WeightedColumn out;
    auto emit = [&](double lo, double hi, double reach2) {
        if (!(hi > lo)) return;
        if (!out.empty() && out.back().z_out == lo && out.back().reach2 == reach2)
            out.back().z_out = hi;
        else
            out.push_back({lo, hi, reach2});
    };
    std::size_t ia = 0, ib = 0;
    double cursor = -std::numeric_limits<double>::infinity();
    while (ia < a.size() || ib < b.size()) {
        // Next elementary boundary at or after cursor.
        const WeightedSegment* sa = ia < a.size() ? &a[ia] : nullptr;
        const WeightedSegment* sb = ib < b.size() ? &b[ib] : nullptr;
        const double a_lo = sa ? std::max(sa->z_in, cursor) : std::numeric_limits<double>::infinity();
        const double b_lo = sb ? std::max(sb->z_in, cursor) : std::numeric_limits<double>::infinity();
        const double lo = std::min(a_lo, b_lo);
        const bool in_a = sa && a_lo <= lo;
        const bool in_b = sb && b_lo <= lo;
        double hi;
        if (in_a && in_b)
            hi = std::min(sa->z_out, sb->z_out);
        else if (in_a)
            hi = std::min(sa->z_out, b_lo);
        else
            hi = std::min(sb->z_out, a_lo);
        const double reach2 = in_a && in_b ? std::max(sa->reach2, sb->reach2) : in_a ? sa->reach2 : sb->reach2;
        emit(lo, hi, reach2);
        cursor = hi;
        if (sa && sa->z_out <= cursor) ++ia;
        if (sb && sb->z_out <= cursor) ++ib;
    }
    return out;
}

/// Full 2D dilation of a slice: union of the forward and backward half
/// sweeps. Rows are dexel units, depths world units.
inline std::vector<DexelColumn> dilate_slice(std::span<const DexelColumn> rows, double radius, double spacing,
                                             double eps = 0.0) {
    if (!(radius >= 0.0)) throw InvalidInput("dilate_slice: radius must be >= 0");
    RowSource src = [&](std::size_t r) { return std::span<const Interval>(rows[r]); };
    auto fwd = half_sweep_dilate(rows.size(), src, radius, spacing, SweepDirection::Forward, {}, eps);
    auto bwd = half_sweep_dilate(rows.size(), src, radius, spacing, SweepDirection::Backward, {}, eps);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        fwd[r].insert(fwd[r].end(), bwd[r].begin(), bwd[r].end());
        normalize_in_place(fwd[r], eps);
    }
    return fwd;
}

/// Stage-1 extrusion of a slice: per row, the closest seeds' depth ranges with
/// their transfer reach², forward and backward results combined.
inline std::vector<WeightedColumn> extrude_slice(std::size_t nrows, const RowSource& rows, double radius,
                                                 double spacing, RowWindow win = {}) {
    auto fwd = half_sweep_extrude(nrows, rows, radius, spacing, SweepDirection::Forward, win);
    auto bwd = half_sweep_extrude(nrows, rows, radius, spacing, SweepDirection::Backward, win);
    for (std::size_t r = 0; r < fwd.size(); ++r) {
        if (bwd[r].empty()) continue;
        if (fwd[r].empty())
            fwd[r] = std::move(bwd[r]);
        else
            fwd[r] = merge_max_reach(fwd[r], bwd[r]);
    }
    return fwd;
}

}  // namespace dexoff
