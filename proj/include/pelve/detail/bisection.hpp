#pragma once

#include <optional>

namespace pelve::detail {

struct Bracket {
    double lo;
    double hi;
};

// Leftmost point of [lo, hi] satisfying a monotone predicate (false ... false
// true ... true). Returns nullopt when hi does not satisfy it, lo itself when
// lo does, otherwise a bracket (lo fails, hi holds) narrower than tol.
template <class Pred>
std::optional<Bracket> leftmost_true(Pred&& holds, double lo, double hi, double tol) {
    if (!holds(hi)) return std::nullopt;
    if (holds(lo)) return Bracket{lo, lo};
    while (hi - lo >= tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    return Bracket{lo, hi};
}

}  // namespace pelve::detail
