#include "heunpot/triads.hpp"

#include <algorithm>

namespace heunpot {

bool is_admissible(const Triad& t) {
    int sum = 0;
    for (int d : t.twom) {
        if (d < -2 || d > 2) return false;
        sum += d;
    }
    return sum >= 2 && sum <= 6; // doubled bounds of 1 <= sum m <= 3
}

std::vector<Triad> enumerate_triads() {
    std::vector<Triad> out;
    for (int d1 = 2; d1 >= -2; --d1)
        for (int d2 = 2; d2 >= -2; --d2)
            for (int d3 = 2; d3 >= -2; --d3) {
                Triad t{{d1, d2, d3}};
                if (is_admissible(t)) out.push_back(t);
            }
    return out;
}

Triad canonical_class(const Triad& t) {
    if (!is_admissible(t)) throw UnsupportedTriad("triad outside the admissible set");
    Triad c = t;
    std::sort(c.twom.begin(), c.twom.end(), std::greater<int>());
    return c;
}

std::vector<Triad> canonical_classes() {
    std::vector<Triad> out;
    for (const Triad& t : enumerate_triads()) {
        Triad c = canonical_class(t);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out; // enumeration order is descending, so this list is too
}

int class_index(const Triad& t) {
    Triad c = canonical_class(t);
    std::vector<Triad> cs = canonical_classes();
    auto it = std::find(cs.begin(), cs.end(), c);
    return static_cast<int>(it - cs.begin());
}

} // namespace heunpot
