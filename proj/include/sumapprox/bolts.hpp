#ifndef SUMAPPROX_BOLTS_HPP
#define SUMAPPROX_BOLTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "sumapprox/domain.hpp"
#include "sumapprox/levelling.hpp"

namespace sumapprox {

/// Ordered point sequence whose consecutive points alternately share a
/// class of factor start_relation and of the other factor. Bolts always
/// live on factors 0 and 1.
struct Bolt {
    int start_relation = 0;
    std::vector<int> points;

    int length() const { return static_cast<int>(points.size()); }
    // Factor of the relation at edge position i (0-based).
    int relation_at(int i) const { return (i % 2 == 0) ? start_relation : 1 - start_relation; }
};

enum class BoltStatus { open, closed, invalid };

struct BoltValidation {
    BoltStatus status = BoltStatus::invalid;
    std::string reason;
};

/// Closed iff the length is even and appending the first point extends the
/// alternation legally. Throws std::out_of_range on a bad point id.
BoltValidation validate_bolt(const Domain& d, const Bolt& b);

/// r_l(h) = (1/m) sum_i (-1)^(i+1) h(x_i), 1-based i.
/// Throws std::invalid_argument on an invalid bolt.
double bolt_functional(const Domain& d, const Bolt& b, const Field& h);

/// l1 mass of the merged per-point coefficients; always <= 1 and equal to 1
/// exactly when the odd-position and even-position point sets are disjoint.
double bolt_functional_norm(const Domain& d, const Bolt& b);

struct ShortestBoltResult {
    enum class Kind { found, same_point, unreachable };
    Kind kind = Kind::unreachable;
    Bolt bolt;
};

/// Minimum-length bolt between two points via breadth-first search over
/// (point, last-relation) states; both start relations are tried. Shortest
/// bolts between fixed endpoints are exactly the irreducible ones.
ShortestBoltResult shortest_bolt(const Domain& d, int from, int to);

struct BoltLengthBound {
    bool exceeds_cap = false;
    int max_length = 0;
};

/// Maximum over all ordered point pairs of the shortest-bolt length;
/// exceeds_cap when some pair needs more than `cap` points or is
/// unreachable.
BoltLengthBound max_irreducible_bolt_length(const Domain& d, int cap);

/// All closed bolts of length up to max_len (even, <= 10), canonicalized
/// over rotation and reversal to deduplicate.
std::vector<Bolt> enumerate_closed_bolts(const Domain& d, int max_len);

/// Greedy alternating walk through near-extremal residual values
/// (>= M - slack at odd positions, <= -M + slack at even positions,
/// M = current residual norm), attempting closure back to the start;
/// returns a closed bolt whose functional on the residual is >= M - slack,
/// or nothing if the walk dead-ends within 2k+2 points.
std::optional<Bolt> extract_bolt_from_residual(const LevellingState& st,
                                               const Domain& d, int k,
                                               double slack);

struct LowerBoundBudget {
    int enum_max_len = 8;
    int enum_max_points = 24;  // enumeration only below this point count
    int extract_max_k = 8;
    double slack = 1e-6;
    StopRule stop;
};

struct LowerBound {
    double value = 0.0;
    std::optional<Bolt> witness;
};

/// Best closed-bolt lower bound max |r_l(h)| / ||r_l|| over enumerated
/// (tiny domains) and residual-extracted bolts. Always a sound lower bound
/// on E(h) by duality.
LowerBound best_lower_bound(const Domain& d, const Field& h,
                            const LowerBoundBudget& budget = {});

}  // namespace sumapprox

#endif
