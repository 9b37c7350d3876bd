#include "sumapprox/bolts.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace sumapprox {

namespace {

void check_two_factors(const Domain& d) {
    if (d.num_factors() < 2)
        throw std::invalid_argument("bolts need a domain with at least two factors");
}

}  // namespace

BoltValidation validate_bolt(const Domain& d, const Bolt& b) {
    check_two_factors(d);
    BoltValidation out;
    for (int p : b.points)
        if (p < 0 || p >= d.num_points())
            throw std::out_of_range("bolt point id out of range");
    if (b.start_relation != 0 && b.start_relation != 1) {
        out.reason = "start_relation must be 0 or 1";
        return out;
    }
    const int m = b.length();
    if (m < 2) {
        out.reason = "bolt needs at least two points";
        return out;
    }
    for (int i = 0; i + 1 < m; ++i) {
        if (b.points[i] == b.points[i + 1]) {
            out.reason = "consecutive points equal at position " + std::to_string(i);
            return out;
        }
        const int rel = b.relation_at(i);
        if (d.class_of(b.points[i], rel) != d.class_of(b.points[i + 1], rel)) {
            out.reason = "points at positions " + std::to_string(i) + "," +
                         std::to_string(i + 1) + " do not share a factor-" +
                         std::to_string(rel) + " class";
            return out;
        }
    }
    const int close_rel = b.relation_at(m - 1);
    if (m % 2 == 0 && b.points[m - 1] != b.points[0] &&
        d.class_of(b.points[m - 1], close_rel) == d.class_of(b.points[0], close_rel)) {
        out.status = BoltStatus::closed;
    } else {
        out.status = BoltStatus::open;
    }
    return out;
}

double bolt_functional(const Domain& d, const Bolt& b, const Field& h) {
    if (validate_bolt(d, b).status == BoltStatus::invalid)
        throw std::invalid_argument("invalid bolt");
    double s = 0;
    for (int i = 0; i < b.length(); ++i)
        s += (i % 2 == 0 ? 1.0 : -1.0) * h[b.points[i]];
    return s / b.length();
}

double bolt_functional_norm(const Domain& d, const Bolt& b) {
    if (validate_bolt(d, b).status == BoltStatus::invalid)
        throw std::invalid_argument("invalid bolt");
    std::map<int, int> net;  // point id -> signed visit multiplicity
    for (int i = 0; i < b.length(); ++i) net[b.points[i]] += (i % 2 == 0 ? 1 : -1);
    double mass = 0;
    for (const auto& [_, mult] : net) mass += std::abs(mult);
    return mass / b.length();
}

namespace {

// Breadth-first search over (point, last-relation) states. dist counts bolt
// points (the source counts 1); -1 marks unreached. Each (relation, class)
// pair needs at most two expansions: the first covers every class member
// except the expanding point, the second covers the first expander itself.
struct BoltBfs {
    std::vector<int> dist;    // 2 * V, index r * V + p
    std::vector<int> parent;  // predecessor point, -1 at the frontier roots
};

BoltBfs bolt_bfs(const Domain& d, const LevelSetIndex& ls0, const LevelSetIndex& ls1,
                 int source) {
    const int v = d.num_points();
    BoltBfs out;
    out.dist.assign(2 * v, -1);
    out.parent.assign(2 * v, -1);
    std::vector<int> expansions[2] = {std::vector<int>(ls0.classes.size(), 0),
                                      std::vector<int>(ls1.classes.size(), 0)};
    std::vector<int> expander[2] = {std::vector<int>(ls0.classes.size(), -1),
                                    std::vector<int>(ls1.classes.size(), -1)};
    std::deque<int> queue;

    auto expand = [&](int rel, int from_point, int from_dist) {
        const auto& ls = rel == 0 ? ls0 : ls1;
        const int cls = d.class_of(from_point, rel);
        int& count = expansions[rel][cls];
        if (count >= 2) return;
        if (count == 1) {
            const int first = expander[rel][cls];
            if (first == from_point) return;
            count = 2;
            const int state = rel * v + first;
            if (out.dist[state] < 0) {
                out.dist[state] = from_dist + 1;
                out.parent[state] = from_point;
                queue.push_back(state);
            }
            return;
        }
        count = 1;
        expander[rel][cls] = from_point;
        for (int y : ls.classes[cls]) {
            if (y == from_point) continue;
            const int state = rel * v + y;
            if (out.dist[state] < 0) {
                out.dist[state] = from_dist + 1;
                out.parent[state] = from_point;
                queue.push_back(state);
            }
        }
    };

    expand(0, source, 1);
    expand(1, source, 1);
    while (!queue.empty()) {
        const int state = queue.front();
        queue.pop_front();
        const int rel = state / v;
        const int p = state % v;
        if (p == source) continue;
        expand(1 - rel, p, out.dist[state]);
    }
    return out;
}

}  // namespace

ShortestBoltResult shortest_bolt(const Domain& d, int from, int to) {
    check_two_factors(d);
    if (from < 0 || from >= d.num_points() || to < 0 || to >= d.num_points())
        throw std::out_of_range("point id out of range");
    ShortestBoltResult res;
    if (from == to) {
        res.kind = ShortestBoltResult::Kind::same_point;
        return res;
    }
    const LevelSetIndex ls0 = level_sets(d, 0);
    const LevelSetIndex ls1 = level_sets(d, 1);
    const BoltBfs bfs = bolt_bfs(d, ls0, ls1, from);
    const int v = d.num_points();
    int best_rel = -1;
    for (int r = 0; r < 2; ++r) {
        const int dd = bfs.dist[r * v + to];
        if (dd > 0 && (best_rel < 0 || dd < bfs.dist[best_rel * v + to])) best_rel = r;
    }
    if (best_rel < 0) return res;

    std::vector<int> pts;
    int cur = to, rel = best_rel;
    while (cur != from) {
        pts.push_back(cur);
        const int prev = bfs.parent[rel * v + cur];
        cur = prev;
        rel = 1 - rel;
    }
    pts.push_back(from);
    std::reverse(pts.begin(), pts.end());
    res.kind = ShortestBoltResult::Kind::found;
    res.bolt.points = std::move(pts);
    // Relations alternate; the last edge used best_rel, so the first edge's
    // relation follows from the parity of the edge count.
    const int edges = res.bolt.length() - 1;
    res.bolt.start_relation = (edges % 2 == 1) ? best_rel : 1 - best_rel;
    return res;
}

BoltLengthBound max_irreducible_bolt_length(const Domain& d, int cap) {
    check_two_factors(d);
    if (cap < 2) throw std::invalid_argument("cap must be >= 2");
    const LevelSetIndex ls0 = level_sets(d, 0);
    const LevelSetIndex ls1 = level_sets(d, 1);
    const int v = d.num_points();
    // A point alone in both of its classes can always be matched exactly by
    // its own class constants; it joins no bolt and imposes no constraint,
    // so it is left out of the all-pairs maximum.
    std::vector<char> isolated(v, 0);
    for (int p = 0; p < v; ++p)
        isolated[p] = ls0.classes[d.class_of(p, 0)].size() == 1 &&
                      ls1.classes[d.class_of(p, 1)].size() == 1;
    BoltLengthBound out;
    for (int src = 0; src < v; ++src) {
        if (isolated[src]) continue;
        const BoltBfs bfs = bolt_bfs(d, ls0, ls1, src);
        for (int p = 0; p < v; ++p) {
            if (p == src || isolated[p]) continue;
            const int d0 = bfs.dist[p];
            const int d1 = bfs.dist[v + p];
            int dmin;
            if (d0 > 0 && d1 > 0)
                dmin = std::min(d0, d1);
            else if (d0 > 0 || d1 > 0)
                dmin = std::max(d0, d1);
            else {
                out.exceeds_cap = true;  // unreachable pair
                out.max_length = 0;
                return out;
            }
            if (dmin > cap) {
                out.exceeds_cap = true;
                out.max_length = 0;
                return out;
            }
            out.max_length = std::max(out.max_length, dmin);
        }
    }
    return out;
}

namespace {

// Lexicographically minimal representative over all rotations and both
// traversal directions of a closed bolt.
Bolt canonical_closed(const Domain& d, const Bolt& b) {
    const int m = b.length();
    std::pair<std::vector<int>, int> best;
    bool have = false;
    for (int dir : {+1, -1}) {
        for (int j = 0; j < m; ++j) {
            std::vector<int> pts(m);
            for (int i = 0; i < m; ++i) pts[i] = b.points[((j + dir * i) % m + m) % m];
            const int first_edge = dir == 1 ? j : ((j - 1 + m) % m);
            const int rel = b.relation_at(first_edge);
            auto cand = std::make_pair(std::move(pts), rel);
            if (!have || cand < best) {
                best = std::move(cand);
                have = true;
            }
        }
    }
    Bolt out;
    out.points = best.first;
    out.start_relation = best.second;
    (void)d;
    return out;
}

}  // namespace

std::vector<Bolt> enumerate_closed_bolts(const Domain& d, int max_len) {
    check_two_factors(d);
    if (max_len % 2 != 0 || max_len < 2 || max_len > 10)
        throw std::invalid_argument("max_len must be even and in [2,10]");
    const LevelSetIndex index[2] = {level_sets(d, 0), level_sets(d, 1)};

    std::set<std::pair<std::vector<int>, int>> seen;
    std::vector<Bolt> out;
    std::vector<int> seq;

    auto dfs = [&](auto&& self, int start_rel) -> void {
        const int len = static_cast<int>(seq.size());
        if (len >= 2 && len % 2 == 0) {
            const int close_rel = (len - 1) % 2 == 0 ? start_rel : 1 - start_rel;
            if (seq.back() != seq.front() &&
                d.class_of(seq.back(), close_rel) == d.class_of(seq.front(), close_rel)) {
                Bolt b;
                b.start_relation = start_rel;
                b.points = seq;
                Bolt canon = canonical_closed(d, b);
                auto key = std::make_pair(canon.points, canon.start_relation);
                if (seen.insert(key).second) out.push_back(std::move(canon));
            }
        }
        if (len == max_len) return;
        const int rel = (len - 1) % 2 == 0 ? start_rel : 1 - start_rel;
        const int last = seq.back();
        for (int y : index[rel].classes[d.class_of(last, rel)]) {
            if (y == last || y < seq.front()) continue;  // rotations cover smaller starts
            seq.push_back(y);
            self(self, start_rel);
            seq.pop_back();
        }
    };

    for (int p0 = 0; p0 < d.num_points(); ++p0) {
        for (int r : {0, 1}) {
            seq.assign(1, p0);
            dfs(dfs, r);
        }
    }
    return out;
}

std::optional<Bolt> extract_bolt_from_residual(const LevellingState& st,
                                               const Domain& d, int k, double slack) {
    check_two_factors(d);
    if (slack <= 0) throw std::invalid_argument("slack must be positive");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const Field& r = st.residual;
    const double m = sup_norm(r);
    if (m <= slack) return std::nullopt;  // no extremal alternation left

    const LevelSetIndex index[2] = {level_sets(d, 0), level_sets(d, 1)};
    const int max_points = 2 * k + 2;

    for (int start_rel : {0, 1}) {
        // x1: global argmax, smallest id among ties.
        int x1 = 0;
        for (int p = 1; p < d.num_points(); ++p)
            if (r[p] > r[x1]) x1 = p;
        if (r[x1] < m - slack) continue;

        std::vector<int> seq{x1};
        while (static_cast<int>(seq.size()) < max_points) {
            const int pos = static_cast<int>(seq.size());  // 0-based next position
            const int rel = (pos - 1) % 2 == 0 ? start_rel : 1 - start_rel;
            const bool want_low = pos % 2 == 1;  // even 1-based position
            const int last = seq.back();
            int best = -1;
            for (int y : index[rel].classes[d.class_of(last, rel)]) {
                if (y == last) continue;
                if (best < 0 || (want_low ? r[y] < r[best] : r[y] > r[best])) best = y;
            }
            if (best < 0) break;
            if (want_low ? r[best] > -m + slack : r[best] < m - slack) break;
            seq.push_back(best);
            if (seq.size() % 2 == 0) {
                const int close_rel = (seq.size() - 1) % 2 == 0 ? start_rel : 1 - start_rel;
                if (seq.back() != seq.front() &&
                    d.class_of(seq.back(), close_rel) == d.class_of(seq.front(), close_rel)) {
                    Bolt b;
                    b.start_relation = start_rel;
                    b.points = seq;
                    if (std::fabs(bolt_functional(d, b, r)) >= m - slack) return b;
                }
            }
        }
    }
    return std::nullopt;
}

LowerBound best_lower_bound(const Domain& d, const Field& h,
                            const LowerBoundBudget& budget) {
    check_two_factors(d);
    LowerBound best;
    auto consider = [&](const Bolt& b) {
        const double norm = bolt_functional_norm(d, b);
        if (norm < 1e-15) return;
        const double value = std::fabs(bolt_functional(d, b, h)) / norm;
        if (value > best.value) {
            best.value = value;
            best.witness = b;
        }
    };

    if (d.num_points() <= budget.enum_max_points) {
        const int len = std::min(budget.enum_max_len - budget.enum_max_len % 2, 10);
        if (len >= 2)
            for (const Bolt& b : enumerate_closed_bolts(d, len)) consider(b);
    }

    RunOptions opts;
    opts.stop = budget.stop;
    if (d.num_factors() > 2) opts.schedule = {0, 1};  // bolts live on factors 0,1
    LevellingState st = run_levelling(d, h, opts);
    for (int k = 1; k <= budget.extract_max_k; ++k) {
        if (auto b = extract_bolt_from_residual(st, d, k, budget.slack)) consider(*b);
    }
    return best;
}

}  // namespace sumapprox
