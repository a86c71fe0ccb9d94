#pragma once

#include <array>
#include <vector>

#include "heunpot/errors.hpp"

namespace heunpot {

// Exponent triple (m1,m2,m3) of the coordinate-map ansatz rho = (1/sigma)
// prod (z-a_i)^{m_i}. Stored as doubled integers so admissibility tests and
// sums are exact.
struct Triad {
    std::array<int, 3> twom{2, 2, 2};

    double m(int i) const { return 0.5 * twom[static_cast<size_t>(i)]; }
    friend bool operator==(const Triad&, const Triad&) = default;
};

// each m_i in {-1,-1/2,0,1/2,1} and 1 <= m1+m2+m3 <= 3
bool is_admissible(const Triad& t);

// All 35 admissible triads, lexicographically descending on (m1,m2,m3).
std::vector<Triad> enumerate_triads();

// Representative of the permutation orbit: components sorted non-increasing.
// Throws UnsupportedTriad if t is not admissible.
Triad canonical_class(const Triad& t);

// The 11 distinct canonical representatives, lexicographically descending.
std::vector<Triad> canonical_classes();

// Index of canonical_class(t) within canonical_classes() (0-based).
int class_index(const Triad& t);

} // namespace heunpot
