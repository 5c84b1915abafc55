#pragma once

#include "tplcnn/errors.hpp"
#include "tplcnn/grid.hpp"
#include "tplcnn/network.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace tplcnn {

/// Ordered per-cycle binary phase maps; cycles before transient_skip are
/// excluded from analysis.
struct PhaseMapSequence {
    std::vector<BoolGrid> maps;
    int transient_skip = 0;
};

/// Per-cell lock-phase classes; kUnlockedClass marks cells whose firing
/// cycles have no constant residue mod n (or that never fired).
constexpr int kUnlockedClass = -1;

/// Binary phase map of one pump cycle, rebuilt from the event record:
/// a cell is true iff it tunneled at least once during that cycle.
inline BoolGrid phase_map_for_cycle(const RunRecord& record, int cycle)
{
    if (cycle < 0 || cycle >= static_cast<int>(record.phase_maps.size())) {
        throw IndexOutOfRange("cycle " + std::to_string(cycle) + " outside run of " +
                              std::to_string(record.phase_maps.size()) + " cycles");
    }
    BoolGrid map(record.height, record.width, 0);
    for (const NetworkEvent& e : record.events) {
        if (e.cycle == cycle) map(e.row, e.col) = 1;
    }
    return map;
}

/// n-ary phase classes over a window of cycles: a cell's class is the
/// constant residue (cycle mod n) of its firings, or kUnlockedClass.
inline Grid<int> phase_class_map(const RunRecord& record, int cycle_begin, int cycle_end,
                                 int n)
{
    if (n < 1) throw DomainError("phase_class_map requires n >= 1");
    if (cycle_begin >= cycle_end) throw EmptyWindow("phase_class_map window is empty");

    Grid<int> classes(record.height, record.width, kUnlockedClass);
    Grid<int> seen(record.height, record.width, 0);
    for (const NetworkEvent& e : record.events) {
        if (e.cycle < cycle_begin || e.cycle >= cycle_end) continue;
        const int residue = static_cast<int>(((e.cycle % n) + n) % n);
        if (!seen(e.row, e.col)) {
            classes(e.row, e.col) = residue;
            seen(e.row, e.col) = 1;
        } else if (classes(e.row, e.col) != residue) {
            classes(e.row, e.col) = kUnlockedClass;
            seen(e.row, e.col) = 2; // drifted, stays unlocked
        }
    }
    for (int r = 0; r < record.height; ++r)
        for (int c = 0; c < record.width; ++c)
            if (seen(r, c) == 2) classes(r, c) = kUnlockedClass;
    return classes;
}

/// Smallest P >= 1 such that every post-transient map equals the map P
/// cycles later (exact equality), or nothing. Periods are only claimed
/// when observed at least twice, so the effective search bound is
/// min(p_max, (length - transient) / 2).
inline std::optional<int> detect_period(const PhaseMapSequence& seq, int p_max = 64)
{
    const int len = static_cast<int>(seq.maps.size());
    const int start = seq.transient_skip;
    const int usable = len - start;
    const int bound = std::min(p_max, usable / 2);
    for (int p = 1; p <= bound; ++p) {
        bool ok = true;
        for (int i = start; i + p < len; ++i) {
            if (!(seq.maps[i] == seq.maps[i + p])) {
                ok = false;
                break;
            }
        }
        if (ok) return p;
    }
    return std::nullopt;
}

/// Per-cycle centroid (row, col) of true cells; cycles with no true cell
/// are skipped (nullopt).
inline std::vector<std::optional<std::pair<double, double>>>
centroid_track(const PhaseMapSequence& seq)
{
    std::vector<std::optional<std::pair<double, double>>> track;
    bool any = false;
    for (std::size_t i = seq.transient_skip; i < seq.maps.size(); ++i) {
        const BoolGrid& m = seq.maps[i];
        long count = 0;
        double sr = 0.0, sc = 0.0;
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c)
                if (m(r, c)) {
                    ++count;
                    sr += r;
                    sc += c;
                }
        if (count == 0) {
            track.emplace_back(std::nullopt);
        } else {
            track.emplace_back(std::make_pair(sr / count, sc / count));
            any = true;
        }
    }
    if (!any) throw AllEmpty("no cycle has any active cell");
    return track;
}

/// Inner 4-neighborhood boundary of a binary mask; cells outside the
/// grid count as false, so true cells on the grid edge are boundary.
inline BoolGrid boundary_mask(const BoolGrid& mask)
{
    BoolGrid edge(mask.rows(), mask.cols(), 0);
    for (int r = 0; r < mask.rows(); ++r) {
        for (int c = 0; c < mask.cols(); ++c) {
            if (!mask(r, c)) continue;
            const bool up = r > 0 && mask(r - 1, c);
            const bool down = r + 1 < mask.rows() && mask(r + 1, c);
            const bool left = c > 0 && mask(r, c - 1);
            const bool right = c + 1 < mask.cols() && mask(r, c + 1);
            if (!(up && down && left && right)) edge(r, c) = 1;
        }
    }
    return edge;
}

struct ScoreTriple {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline ScoreTriple binary_f1(const BoolGrid& predicted, const BoolGrid& truth)
{
    long tp = 0, fp = 0, fn = 0;
    for (int r = 0; r < truth.rows(); ++r) {
        for (int c = 0; c < truth.cols(); ++c) {
            const bool p = predicted(r, c);
            const bool t = truth(r, c);
            if (p && t) ++tp;
            else if (p && !t) ++fp;
            else if (!p && t) ++fn;
        }
    }
    ScoreTriple s;
    s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

struct EdgeScoreResult {
    std::vector<ScoreTriple> per_cycle; ///< indexed from transient_skip
    int best_cycle = -1;                ///< absolute cycle index of the best F1
    ScoreTriple best;
};

/// Per-cycle F1 of each phase map against the 4-neighborhood boundary of
/// the input mask; the best cycle is reported.
inline EdgeScoreResult edge_score(const PhaseMapSequence& seq, const BoolGrid& input_mask)
{
    bool any_true = false, any_false = false;
    for (auto v : input_mask) (v ? any_true : any_false) = true;
    if (!any_true || !any_false) {
        throw DegenerateMask("edge_score needs a mask with both true and false cells");
    }
    const BoolGrid truth = boundary_mask(input_mask);

    EdgeScoreResult result;
    for (std::size_t i = seq.transient_skip; i < seq.maps.size(); ++i) {
        if (seq.maps[i].rows() != input_mask.rows() ||
            seq.maps[i].cols() != input_mask.cols()) {
            throw ConfigError("phase map and mask dimensions differ");
        }
        ScoreTriple s = binary_f1(seq.maps[i], truth);
        result.per_cycle.push_back(s);
        if (s.f1 > result.best.f1 || result.best_cycle < 0) {
            result.best = s;
            result.best_cycle = static_cast<int>(i);
        }
    }
    return result;
}

/// Corner ground truth for a rectangular mask: its four corner cells,
/// dilated by a Chebyshev radius.
inline BoolGrid corner_mask(const BoolGrid& rect_mask, int radius = 1)
{
    int r0 = rect_mask.rows(), r1 = -1, c0 = rect_mask.cols(), c1 = -1;
    for (int r = 0; r < rect_mask.rows(); ++r)
        for (int c = 0; c < rect_mask.cols(); ++c)
            if (rect_mask(r, c)) {
                r0 = std::min(r0, r);
                r1 = std::max(r1, r);
                c0 = std::min(c0, c);
                c1 = std::max(c1, c);
            }
    BoolGrid corners(rect_mask.rows(), rect_mask.cols(), 0);
    if (r1 < 0) return corners;
    const std::pair<int, int> pts[4] = {{r0, c0}, {r0, c1}, {r1, c0}, {r1, c1}};
    for (const auto& [pr, pc] : pts) {
        for (int r = pr - radius; r <= pr + radius; ++r)
            for (int c = pc - radius; c <= pc + radius; ++c)
                if (corners.in_bounds(r, c)) corners(r, c) = 1;
    }
    return corners;
}

struct SegmentationScore {
    double threshold = 0.0;
    double agreement = 0.0;
};

/// Best pixel agreement between the map and a thresholding of the gray
/// input, over all distinct input values as candidate thresholds; ties
/// break toward the smaller threshold.
inline SegmentationScore segmentation_score(const BoolGrid& map, const RealGrid& gray)
{
    if (map.rows() != gray.rows() || map.cols() != gray.cols()) {
        throw ConfigError("phase map and input dimensions differ");
    }
    std::set<double> candidates(gray.begin(), gray.end());
    // One candidate above the maximum so the all-false partition is
    // available (matters for low-contrast inputs).
    candidates.insert(*candidates.rbegin() + 1.0);
    SegmentationScore best;
    bool first = true;
    for (double theta : candidates) {
        long agree = 0;
        for (int r = 0; r < map.rows(); ++r)
            for (int c = 0; c < map.cols(); ++c)
                if (static_cast<bool>(map(r, c)) == (gray(r, c) >= theta)) ++agree;
        const double frac = static_cast<double>(agree) / static_cast<double>(map.size());
        if (first || frac > best.agreement) {
            best.threshold = theta;
            best.agreement = frac;
            first = false;
        }
    }
    return best;
}

} // namespace tplcnn
